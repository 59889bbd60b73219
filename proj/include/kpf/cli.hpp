#pragma once

// Command-line front end: solve | factorize | dressing | demo-euler | verify.
// Exit codes: 0 when every requested verdict passes, 1 when a check or the
// computation fails, 2 on configuration or parse errors. Failures also print
// {"error": {"code": ..., "message": ...}} on the error stream.

#include "kpf/json_io.hpp"
#include "kpf/laurent.hpp"

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace kpf::cli {

using io::json;

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string &bytes);

// Reports are pure functions of their inputs except for "generated_at", which
// `verify` ignores.
json solve_report(const LaxOp &l0, int k_max, int v_max, int depth, const std::set<Check> &checks);
json factor_report(const TPsiSeries &u, int depth);
json dressing_report(const LaxOp &l0, int depth);
json euler_report(const std::vector<int> &n_list, int m_max);
std::string euler_csv(const json &report);

// Recomputes a stored report from its embedded input and parameters.
json verify_report(const json &stored);

} // namespace kpf::cli
