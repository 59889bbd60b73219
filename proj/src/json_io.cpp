#include "kpf/json_io.hpp"

namespace kpf::io {

namespace {

[[noreturn]] void bad(const std::string &what)
{
    throw Error(ErrorCode::parse_error, what);
}

const json &field(const json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key))
        bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

int as_int(const json &j, const char *what)
{
    if (!j.is_number_integer())
        bad(std::string(what) + " must be an integer");
    return j.get<int>();
}

json base_json(const FourierElem &f)
{
    json a = json::array();
    for (const auto &[n, c] : f.terms()) {
        json t = {n, to_json(c.re)};
        if (!c.is_real())
            t.push_back(to_json(c.im));
        a.push_back(std::move(t));
    }
    return a;
}

json base_json(const PolyElem &p)
{
    json a = json::array();
    for (const auto &[d, c] : p.terms())
        a.push_back({d, to_json(c)});
    return a;
}

FourierElem fourier_from_json(const json &j)
{
    if (!j.is_array())
        bad("Fourier element must be an array of [n, re, im?]");
    std::vector<FourierElem::Term> t;
    for (const auto &e : j) {
        if (!e.is_array() || e.size() < 2 || e.size() > 3 || !e[0].is_number_integer())
            bad("Fourier term must be [n, re] or [n, re, im]");
        GaussRational c(rational_from_json(e[1]), e.size() == 3 ? rational_from_json(e[2]) : Rational(0));
        t.emplace_back(e[0].get<long>(), std::move(c));
    }
    return FourierElem(std::move(t));
}

PolyElem poly_from_json(const json &j)
{
    if (!j.is_array())
        bad("polynomial must be an array of [d, c]");
    std::vector<PolyElem::Term> t;
    for (const auto &e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || e[0].get<int>() < 0)
            bad("polynomial term must be [d >= 0, c]");
        t.emplace_back(e[0].get<int>(), rational_from_json(e[1]));
    }
    return PolyElem(std::move(t));
}

template <class Base, class Parse>
ZSeries<Base> zseries_from_json(const json &j, int z_max, Parse parse)
{
    if (!j.is_array() || static_cast<int>(j.size()) > z_max + 1)
        bad("z-series element must be an array of at most z_max + 1 base elements");
    std::vector<Base> c(z_max + 1);
    for (std::size_t m = 0; m < j.size(); ++m)
        c[m] = parse(j[m]);
    return ZSeries<Base>(z_max, std::move(c));
}

json with_ring(const RingTag &tag, const char *kind)
{
    json j = to_json(tag);
    j["kind"] = kind;
    return j;
}

} // namespace

json to_json(const Rational &r)
{
    return to_string(r);
}

Rational rational_from_json(const json &j)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (!j.is_string())
        bad("rational must be a string \"p/q\" or an integer");
    return parse_rational(j.get<std::string>());
}

RingTag parse_ring(const std::string &name, int z_max)
{
    if (name == "fourier")
        return RingTag::fourier();
    if (name == "poly")
        return RingTag::poly();
    if (name == "fourier-z" || name == "poly-z") {
        if (z_max < 0)
            throw Error(ErrorCode::config_error, "ring " + name + " needs z_max >= 0");
        return name == "fourier-z" ? RingTag::fourier_z(z_max) : RingTag::poly_z(z_max);
    }
    throw Error(ErrorCode::config_error, "unknown ring '" + name + "'");
}

std::string ring_name(const RingTag &tag)
{
    std::string base = tag.base == BaseRing::fourier ? "fourier" : "poly";
    return tag.has_z() ? base + "-z" : base;
}

json to_json(const RingTag &tag)
{
    return {{"ring", ring_name(tag)}, {"z_max", tag.has_z() ? tag.z_max : 0}};
}

RingTag ring_from_json(const json &j)
{
    const json &r = field(j, "ring");
    if (!r.is_string())
        bad("ring must be a string");
    int z_max = j.contains("z_max") ? as_int(j.at("z_max"), "z_max") : -1;
    try {
        return parse_ring(r.get<std::string>(), z_max);
    } catch (const Error &e) {
        bad(e.what());
    }
}

json to_json(const RingElem &e)
{
    return std::visit(
        [](const auto &x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, FourierElem> || std::is_same_v<T, PolyElem>) {
                return base_json(x);
            } else {
                json a = json::array();
                for (const auto &c : x.coeffs())
                    a.push_back(base_json(c));
                while (!a.empty() && a.back().empty())
                    a.erase(a.size() - 1);
                return a;
            }
        },
        e.storage());
}

RingElem ring_elem_from_json(const json &j, const RingTag &tag)
{
    if (!tag.has_z()) {
        if (tag.base == BaseRing::fourier)
            return fourier_from_json(j);
        return poly_from_json(j);
    }
    if (tag.base == BaseRing::fourier)
        return zseries_from_json<FourierElem>(j, tag.z_max, fourier_from_json);
    return zseries_from_json<PolyElem>(j, tag.z_max, poly_from_json);
}

json to_json(const Scalar &s)
{
    json a = json::array();
    for (const auto &c : s.coeffs())
        a.push_back({to_json(c.re), to_json(c.im)});
    return a;
}

json depth_json(int depth)
{
    return is_exact_depth(depth) ? json("exact") : json(depth);
}

int depth_from_json(const json &j)
{
    if (j.is_string() && j.get<std::string>() == "exact")
        return kExactDepth;
    return as_int(j, "depth");
}

json to_json(const PsiOp &p)
{
    json c = json::array();
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it)
        c.push_back({{"order", it->first}, {"coeff", to_json(it->second)}});
    return {{"depth", depth_json(p.depth())}, {"coeffs", std::move(c)}};
}

PsiOp psi_op_from_json(const json &j, const RingTag &tag)
{
    const int depth = j.is_object() && j.contains("depth") ? depth_from_json(j.at("depth")) : kExactDepth;
    const json &c = field(j, "coeffs");
    if (!c.is_array())
        bad("coeffs must be an array");
    PsiOp p(tag, depth);
    for (const auto &e : c) {
        const int a = as_int(field(e, "order"), "order");
        if (a < depth)
            bad("coefficient of order " + std::to_string(a) + " lies below the stated depth");
        if (p.coeffs().count(a))
            bad("order " + std::to_string(a) + " given twice");
        p.set(a, ring_elem_from_json(field(e, "coeff"), tag));
    }
    return p;
}

json to_json(const TimeMonomial &m)
{
    return m.exponents();
}

TimeMonomial monomial_from_json(const json &j)
{
    if (!j.is_array())
        bad("time monomial must be an exponent array");
    std::vector<int> e;
    for (const auto &x : j) {
        if (!x.is_number_integer() || x.get<int>() < 0)
            bad("time exponents must be non-negative integers");
        e.push_back(x.get<int>());
    }
    return TimeMonomial(std::move(e));
}

json to_json(const TPsiSeries &s)
{
    json slots = json::array();
    for (const auto &[m, p] : s.terms())
        slots.push_back({{"t", to_json(m)}, {"op", to_json(p)}});
    return {{"v_max", s.vmax()}, {"barred", s.barred()}, {"slots", std::move(slots)}};
}

TPsiSeries t_series_from_json(const json &j, const RingTag &tag)
{
    TPsiSeries s(tag, as_int(field(j, "v_max"), "v_max"));
    const json &slots = field(j, "slots");
    if (!slots.is_array())
        bad("slots must be an array");
    for (const auto &e : slots) {
        TimeMonomial m = monomial_from_json(field(e, "t"));
        if (m.valuation() > s.vmax())
            bad("slot " + m.str() + " exceeds v_max");
        if (s.find(m))
            bad("slot " + m.str() + " given twice");
        s.set(m, psi_op_from_json(field(e, "op"), tag));
    }
    if (j.contains("barred") && j.at("barred").get<bool>())
        s.set_barred(true);
    return s;
}

json to_json(const ScalarTSeries &s)
{
    json a = json::array();
    for (const auto &[m, v] : s)
        a.push_back({{"t", to_json(m)}, {"value", to_json(v)}});
    return a;
}

json to_json(const RingTSeries &s)
{
    json a = json::array();
    for (const auto &[m, v] : s)
        a.push_back({{"t", to_json(m)}, {"value", to_json(v)}});
    return a;
}

json lax_input_to_json(const LaxOp &l)
{
    json j = with_ring(l.ring(), "LaxOp");
    j["op"] = to_json(l.op());
    return j;
}

LaxOp lax_input_from_json(const json &j)
{
    RingTag tag = ring_from_json(j);
    PsiOp op = psi_op_from_json(field(j, "op"), tag);
    try {
        return LaxOp(std::move(op));
    } catch (const Error &e) {
        bad(e.what());
    }
}

json series_input_to_json(const TPsiSeries &s)
{
    json j = with_ring(s.ring(), "TPsiSeries");
    j["series"] = to_json(s);
    return j;
}

TPsiSeries series_input_from_json(const json &j)
{
    RingTag tag = ring_from_json(j);
    return t_series_from_json(field(j, "series"), tag);
}

json to_json(const CheckOutcome &c, int cap)
{
    json j = {{"name", c.name},
              {"check", to_string(c.check)},
              {"pass", c.pass},
              {"nonzero_slots", c.nonzero_slots},
              {"detail", c.detail}};
    j["verified_depth"] = c.verified_depth ? depth_json(*c.verified_depth) : json(nullptr);
    const bool fits = c.nonzero_slots <= cap;
    j["residual_truncated"] = !fits;
    if (fits) {
        std::visit(
            [&](const auto &r) {
                using T = std::decay_t<decltype(r)>;
                if constexpr (!std::is_same_v<T, std::monostate>)
                    j["residual"] = to_json(r);
            },
            c.residual);
    }
    return j;
}

} // namespace kpf::io
