#include "kpf/cli.hpp"

#include "CLI11.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace kpf::cli {

namespace {

constexpr int kFormatVersion = 1;

struct RunConfig {
    std::string ring;
    int z_max = -1;
    int k_max = 3;
    int v_max = 4;
    int depth = -6;
    std::string in;
    std::string out;
    std::vector<std::string> checks;
    std::vector<int> n_list{10, 100, 1000};
    int m_max = 5;
    std::string format = "json";
};

int exit_code(ErrorCode c)
{
    switch (c) {
    case ErrorCode::config_error:
    case ErrorCode::parse_error:
    case ErrorCode::insufficient_kmax:
        return 2;
    default:
        return 1;
    }
}

json error_json(const Error &e)
{
    json j = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (auto *nz = dynamic_cast<const NonZeroMean *>(&e)) {
        j["step"] = nz->step();
        j["mean"] = io::to_json(nz->mean());
    }
    return {{"error", j}};
}

std::string timestamp()
{
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

json read_json(const std::string &path)
{
    if (path.empty())
        throw Error(ErrorCode::config_error, "--in is required");
    std::ifstream f(path);
    if (!f)
        throw Error(ErrorCode::config_error, "cannot read " + path);
    try {
        return json::parse(f);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::parse_error, path + ": " + e.what());
    }
}

void write_text(const std::string &path, const std::string &text, std::ostream &out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw Error(ErrorCode::config_error, "cannot write " + path);
    f << text;
}

void write_report(const RunConfig &cfg, json rep, std::ostream &out)
{
    rep["generated_at"] = timestamp();
    write_text(cfg.out, rep.dump(2) + "\n", out);
}

// --ring, when given, must agree with the ring recorded in the input file.
void check_ring(const RunConfig &cfg, const RingTag &file_ring)
{
    if (cfg.ring.empty())
        return;
    RingTag want = io::parse_ring(cfg.ring, cfg.z_max);
    if (!(want == file_ring))
        throw Error(ErrorCode::config_error, "--ring " + cfg.ring + " does not match the input's ring " +
                                                 io::ring_name(file_ring));
}

void validate_truncation(int k_max, int v_max, int depth)
{
    if (v_max < 1)
        throw Error(ErrorCode::config_error, "vMax must be >= 1");
    if (depth > -1)
        throw Error(ErrorCode::config_error, "depth must be <= -1");
    if (k_max < 1)
        throw Error(ErrorCode::config_error, "kMax must be >= 1");
}

std::set<Check> parse_checks(const std::vector<std::string> &names, int k_max)
{
    if (names.empty() || (names.size() == 1 && names[0] == "all")) {
        std::set<Check> s = solution_checks();
        if (k_max < 3)
            s.erase(Check::kp1);
        return s;
    }
    std::set<Check> s;
    for (const auto &n : names)
        s.insert(parse_check(n));
    if (s.count(Check::kp1) && k_max < 3)
        throw Error(ErrorCode::insufficient_kmax, "check kp1 needs kMax >= 3");
    return s;
}

json input_block(const json &input)
{
    return {{"input", input}, {"input_sha256", sha256_hex(input.dump())}};
}

bool all_pass(const std::vector<CheckOutcome> &outs)
{
    return std::all_of(outs.begin(), outs.end(), [](const CheckOutcome &o) { return o.pass; });
}

int cmd_solve(const RunConfig &cfg, std::ostream &out)
{
    LaxOp l0 = io::lax_input_from_json(read_json(cfg.in));
    check_ring(cfg, l0.ring());
    validate_truncation(cfg.k_max, cfg.v_max, cfg.depth);
    json rep = solve_report(l0, cfg.k_max, cfg.v_max, cfg.depth, parse_checks(cfg.checks, cfg.k_max));
    const bool pass = rep["pass"].get<bool>();
    write_report(cfg, std::move(rep), out);
    return pass ? 0 : 1;
}

int cmd_factorize(const RunConfig &cfg, std::ostream &out)
{
    TPsiSeries u = io::series_input_from_json(read_json(cfg.in));
    check_ring(cfg, u.ring());
    if (cfg.depth > -1)
        throw Error(ErrorCode::config_error, "depth must be <= -1");
    json rep = factor_report(u, cfg.depth);
    const bool pass = rep["pass"].get<bool>();
    write_report(cfg, std::move(rep), out);
    return pass ? 0 : 1;
}

int cmd_dressing(const RunConfig &cfg, std::ostream &out, std::ostream &err)
{
    LaxOp l0 = io::lax_input_from_json(read_json(cfg.in));
    check_ring(cfg, l0.ring());
    if (cfg.depth > -1)
        throw Error(ErrorCode::config_error, "depth must be <= -1");
    json rep = dressing_report(l0, cfg.depth);
    const bool pass = rep["pass"].get<bool>();
    if (rep.contains("error"))
        err << json({{"error", rep["error"]}}).dump() << "\n";
    write_report(cfg, std::move(rep), out);
    return pass ? 0 : 1;
}

int cmd_demo_euler(const RunConfig &cfg, std::ostream &out)
{
    if (cfg.n_list.empty())
        throw Error(ErrorCode::config_error, "--n needs at least one value");
    for (int n : cfg.n_list)
        if (n < 1)
            throw Error(ErrorCode::config_error, "--n values must be >= 1");
    if (cfg.m_max < 0)
        throw Error(ErrorCode::config_error, "--mmax must be >= 0");
    if (cfg.format != "json" && cfg.format != "csv")
        throw Error(ErrorCode::config_error, "--format must be json or csv");
    json rep = euler_report(cfg.n_list, cfg.m_max);
    const bool pass = rep["pass"].get<bool>();
    if (cfg.format == "csv")
        write_text(cfg.out, euler_csv(rep), out);
    else
        write_report(cfg, std::move(rep), out);
    return pass ? 0 : 1;
}

int cmd_verify(const RunConfig &cfg, std::ostream &out)
{
    json rep = verify_report(read_json(cfg.in));
    const bool pass = rep["pass"].get<bool>();
    write_report(cfg, std::move(rep), out);
    return pass ? 0 : 1;
}

} // namespace

std::string sha256_hex(const std::string &bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorCode::config_error, "SHA-256 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

json solve_report(const LaxOp &l0, int k_max, int v_max, int depth, const std::set<Check> &checks)
{
    SolveResult r = kp_solve(l0, k_max, v_max, depth);
    std::vector<CheckOutcome> outs = run_checks(l0, r, checks);

    json rep = input_block(io::lax_input_to_json(l0));
    rep["kind"] = "SolveReport";
    rep["format_version"] = kFormatVersion;
    json names = json::array();
    for (Check c : checks)
        names.push_back(to_string(c));
    rep["params"] = {{"k_max", k_max}, {"v_max", v_max}, {"depth", depth}, {"checks", names}};
    rep["work_depths"] = {{"l_depth", r.l_depth},
                          {"s_depth", r.s_depth},
                          {"u_depth", r.u_depth},
                          {"conjugation_depth", r.conjugation_depth}};
    rep["solution"] = io::to_json(r.l);
    rep["factors"] = {{"s", io::to_json(r.f.s)}, {"y", io::to_json(r.f.y)}};
    json cs = json::array();
    for (const auto &o : outs)
        cs.push_back(io::to_json(o));
    rep["checks"] = std::move(cs);
    if (checks.count(Check::kp1))
        rep["kp1_convention"] = kp1_convention;
    rep["pass"] = all_pass(outs);
    return rep;
}

json factor_report(const TPsiSeries &u, int depth)
{
    FactorPair f = factorize(u, depth);
    json rep = input_block(io::series_input_to_json(u));
    rep["kind"] = "FactorReport";
    rep["format_version"] = kFormatVersion;
    rep["params"] = {{"depth", depth}};
    rep["factors"] = {{"s", io::to_json(f.s)}, {"y", io::to_json(f.y)}};

    CheckOutcome split;
    split.check = Check::shape;
    split.name = "factorization";
    TPsiSeries res = factorization_residual(f.s, u);
    split.verified_depth = res.depth();
    split.pass = res.is_zero() && in_g_at(f.s) && in_d_bar_times(f.y);
    split.detail = "(S U)_- = 0, S in G_{A_t}, Y differential with Y|_{t=0} = 1";
    split.residual = res;

    CheckOutcome round;
    round.check = Check::shape;
    round.name = "roundtrip";
    TPsiSeries back = recompose(f);
    round.verified_depth = back.depth();
    round.pass = back == u;
    round.detail = "S^{-1} Y = U down to depth " + std::to_string(back.depth());

    json cs = json::array();
    for (const auto &o : {split, round}) {
        json j = io::to_json(o);
        j.erase("check");
        cs.push_back(std::move(j));
    }
    rep["checks"] = std::move(cs);
    rep["pass"] = split.pass && round.pass;
    return rep;
}

json dressing_report(const LaxOp &l0, int depth)
{
    json rep = input_block(io::lax_input_to_json(l0));
    rep["kind"] = "DressingReport";
    rep["format_version"] = kFormatVersion;
    rep["params"] = {{"depth", depth}};
    try {
        PsiOp s0 = dressing(l0, depth);
        PsiOp back = compose(compose(s0, PsiOp::d(l0.ring(), 1, kExactDepth)), psi_inverse(s0));
        PsiOp diff = back - l0.op();
        rep["s0"] = io::to_json(s0);
        rep["conjugation"] = {{"residual", io::to_json(diff)}, {"verified_depth", io::depth_json(diff.depth())}};
        rep["pass"] = diff.is_zero();
    } catch (const NonZeroMean &e) {
        rep["error"] = error_json(e)["error"];
        rep["trace_l0_cubed"] = io::to_json(hamiltonian(l0.op(), 2) * Rational(2));
        rep["pass"] = false;
    }
    return rep;
}

json euler_report(const std::vector<int> &n_list, int m_max)
{
    DivergenceReport d = divergence_witness(n_list, m_max);
    json rows = json::array();
    for (const auto &r : d.rows) {
        json cs = json::array();
        for (const auto &c : r.coeffs)
            cs.push_back({{"m", c.m},
                          {"coefficient", io::to_json(c.value)},
                          {"scaled", io::to_json(c.scaled)},
                          {"bound", io::to_json(c.lower)},
                          {"sandwich_ok", c.sandwich_ok}});
        rows.push_back({{"n", r.n}, {"lowest_degree", r.lowest_degree}, {"coeffs", std::move(cs)}});
    }
    json rep = {{"kind", "EulerReport"},
                {"format_version", kFormatVersion},
                {"params", {{"n", n_list}, {"m_max", m_max}}},
                {"rows", std::move(rows)},
                {"pointwise_convergent", d.pointwise_convergent},
                {"order_unbounded", d.order_unbounded},
                {"verdict", d.verdict}};
    rep["pass"] = d.verdict == kDivergenceVerdict;
    return rep;
}

std::string euler_csv(const json &report)
{
    std::ostringstream os;
    os << "n,m,coefficient,scaled,bound,sandwich_ok,lowest_degree\n";
    for (const auto &r : report.at("rows"))
        for (const auto &c : r.at("coeffs"))
            os << r.at("n").get<int>() << ',' << c.at("m").get<int>() << ','
               << c.at("coefficient").get<std::string>() << ',' << c.at("scaled").get<std::string>() << ','
               << c.at("bound").get<std::string>() << ',' << (c.at("sandwich_ok").get<bool>() ? "true" : "false")
               << ',' << r.at("lowest_degree").get<int>() << '\n';
    return os.str();
}

json verify_report(const json &stored)
{
    if (!stored.is_object() || !stored.contains("kind"))
        throw Error(ErrorCode::parse_error, "not a report: missing 'kind'");
    const std::string kind = stored.at("kind").get<std::string>();
    json fresh;
    bool hash_ok = true;
    auto params = [&]() -> const json & {
        if (!stored.contains("params"))
            throw Error(ErrorCode::parse_error, "report has no params");
        return stored.at("params");
    };
    auto input = [&]() -> const json & {
        if (!stored.contains("input") || !stored.contains("input_sha256"))
            throw Error(ErrorCode::parse_error, "report has no embedded input");
        hash_ok = sha256_hex(stored.at("input").dump()) == stored.at("input_sha256").get<std::string>();
        return stored.at("input");
    };
    try {
        if (kind == "SolveReport") {
            LaxOp l0 = io::lax_input_from_json(input());
            const json &p = params();
            std::set<Check> checks;
            for (const auto &c : p.at("checks"))
                checks.insert(parse_check(c.get<std::string>()));
            fresh = solve_report(l0, p.at("k_max").get<int>(), p.at("v_max").get<int>(), p.at("depth").get<int>(),
                                 checks);
        } else if (kind == "FactorReport") {
            TPsiSeries u = io::series_input_from_json(input());
            fresh = factor_report(u, params().at("depth").get<int>());
        } else if (kind == "DressingReport") {
            LaxOp l0 = io::lax_input_from_json(input());
            fresh = dressing_report(l0, params().at("depth").get<int>());
        } else if (kind == "EulerReport") {
            const json &p = params();
            fresh = euler_report(p.at("n").get<std::vector<int>>(), p.at("m_max").get<int>());
        } else {
            throw Error(ErrorCode::parse_error, "unknown report kind '" + kind + "'");
        }
    } catch (const json::exception &e) {
        throw Error(ErrorCode::parse_error, std::string("malformed report: ") + e.what());
    }

    json a = stored;
    a.erase("generated_at");
    json differing = json::array();
    std::set<std::string> keys;
    for (const auto &[k, v] : a.items())
        keys.insert(k);
    for (const auto &[k, v] : fresh.items())
        keys.insert(k);
    for (const auto &k : keys)
        if (!a.contains(k) || !fresh.contains(k) || a.at(k) != fresh.at(k))
            differing.push_back(k);

    const bool reproduced = differing.empty();
    const bool stored_pass = stored.value("pass", false);
    return {{"kind", "VerifyReport"},
            {"format_version", kFormatVersion},
            {"report_kind", kind},
            {"input_sha256_ok", hash_ok},
            {"reproduced", reproduced},
            {"differing_fields", differing},
            {"stored_pass", stored_pass},
            {"pass", hash_ok && reproduced && stored_pass}};
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Exact KP hierarchy solver and verifier"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_io = [&](CLI::App *c) {
        c->add_option("--in", cfg.in, "input JSON file")->required();
        c->add_option("--out", cfg.out, "output file (default stdout)");
    };
    auto add_ring = [&](CLI::App *c) {
        c->add_option("--ring", cfg.ring, "fourier | poly | fourier-z | poly-z; must match the input");
        c->add_option("--zmax", cfg.z_max, "z truncation for the z rings");
    };

    CLI::App *solve = app.add_subcommand("solve", "solve the KP hierarchy from an initial Lax operator");
    add_io(solve);
    add_ring(solve);
    solve->add_option("--kmax", cfg.k_max, "number of flows")->capture_default_str();
    solve->add_option("--vmax", cfg.v_max, "t-valuation truncation")->capture_default_str();
    solve->add_option("--depth", cfg.depth, "verification depth (<= -1)")->capture_default_str();
    solve->add_option("--checks", cfg.checks, "lax zs logderiv conservation kp1 shape dressing, or all")
        ->delimiter(',');

    CLI::App *fact = app.add_subcommand("factorize", "split U = S^{-1} Y");
    add_io(fact);
    add_ring(fact);
    fact->add_option("--depth", cfg.depth, "depth of S (<= -1)")->capture_default_str();

    CLI::App *dress = app.add_subcommand("dressing", "dressing operator S0 with L0 = S0 d S0^{-1}");
    add_io(dress);
    add_ring(dress);
    dress->add_option("--depth", cfg.depth, "depth of S0 (<= -1)")->capture_default_str();

    CLI::App *euler = app.add_subcommand("demo-euler", "Euler products (1 + X^{-1}/n)^n in Q((X))");
    euler->add_option("--n", cfg.n_list, "step counts")->delimiter(',')->capture_default_str();
    euler->add_option("--mmax", cfg.m_max, "highest degree -m reported")->capture_default_str();
    euler->add_option("--format", cfg.format, "json | csv")->capture_default_str();
    euler->add_option("--out", cfg.out, "output file (default stdout)");

    CLI::App *verify = app.add_subcommand("verify", "recompute a stored report and compare");
    add_io(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        err << error_json(Error(ErrorCode::config_error, e.what())).dump() << "\n";
        return 2;
    }

    try {
        if (solve->parsed())
            return cmd_solve(cfg, out);
        if (fact->parsed())
            return cmd_factorize(cfg, out);
        if (dress->parsed())
            return cmd_dressing(cfg, out, err);
        if (euler->parsed())
            return cmd_demo_euler(cfg, out);
        return cmd_verify(cfg, out);
    } catch (const Error &e) {
        err << error_json(e).dump() << "\n";
        return exit_code(e.code());
    }
}

} // namespace kpf::cli
