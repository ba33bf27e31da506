#include <chrono>
#include <cstdio>

#include <json.hpp>

#include "slam/classify.hpp"
#include "slam/error.hpp"
#include "slam/homsolver.hpp"

namespace slam {

std::string to_string(verdict_value v) {
    switch (v) {
    case verdict_value::yes: return "yes";
    case verdict_value::no: return "no";
    case verdict_value::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string structure_hash(const structure& b) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : print_structure(b)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

class phase_timer {
public:
    phase_timer(std::map<std::string, double>& out, std::string name)
        : out_(out), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~phase_timer() {
        out_[name_] += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::map<std::string, double>& out_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

bool dense_fits(int domain, int arity, std::size_t cap) {
    auto size = checked_power(static_cast<std::uint64_t>(domain), arity);
    return size && *size <= cap;
}

void decide_lam(const structure& b, const classify_caps& caps, classification_report& r) {
    {
        phase_timer t(r.timing_ms, "lattice");
        if (b.size() <= 5) {
            if (auto lp = lattice_polymorphisms(b)) {
                r.lattice = std::move(lp);
                r.caterpillar_lam = {verdict_value::yes, "lattice", "lattice polymorphisms on the template"};
                return;
            }
        }
        auto core = core_of(b);
        if (core.core.size() < b.size() && core.core.size() <= 5) {
            if (auto lp = lattice_polymorphisms(core.core)) {
                r.lattice = std::move(lp);
                r.lattice_on_core = true;
                r.caterpillar_lam = {verdict_value::yes, "lattice", "lattice polymorphisms on the core"};
                return;
            }
        }
    }
    auto conclude = [&](int k, int n, absorptive_strategy s, absorptive_result res) {
        const bool holds = res.holds;
        r.absorptive = absorptive_witness{k, n, s, std::move(res)};
        const std::string where = "(k,n)=(" + std::to_string(k) + "," + std::to_string(n) + ")";
        if (holds) r.caterpillar_lam = {verdict_value::yes, "absorptive", "absorptive polymorphism at " + where};
        else r.caterpillar_lam = {verdict_value::no, "absorptive", "no absorptive polymorphism at " + where};
    };
    if (dense_fits(b.size(), r.k0 * r.n0, caps.dense)) {
        phase_timer t(r.timing_ms, "absorptive_dense");
        conclude(r.k0, r.n0, absorptive_strategy::dense,
                 absorptive_check(b, r.k0, r.n0, absorptive_strategy::dense, caps.dense));
        return;
    }
    try {
        phase_timer t(r.timing_ms, "absorptive_setsystem");
        conclude(r.k0, r.n0, absorptive_strategy::setsystem,
                 absorptive_check(b, r.k0, r.n0, absorptive_strategy::setsystem, caps.dense));
        return;
    } catch (const cap_exceeded&) {
    }
    phase_timer t(r.timing_ms, "absorptive_sweep");
    for (int k = 1; k <= caps.max_k; ++k)
        for (int n = 1; n <= caps.max_n; ++n) {
            if (!dense_fits(b.size(), k * n, caps.dense)) continue;
            auto res = absorptive_check(b, k, n, absorptive_strategy::dense, caps.dense);
            r.frontier = {k, n};
            if (!res.holds) {
                conclude(k, n, absorptive_strategy::dense, std::move(res));
                return;
            }
        }
    r.caterpillar_lam = {verdict_value::inconclusive, "",
                         "absorptive polymorphisms exist up to (k,n)=(" + std::to_string(r.frontier.first) + "," +
                             std::to_string(r.frontier.second) + "); the bound (" + std::to_string(r.k0) + "," +
                             std::to_string(r.n0) + ") is beyond the caps"};
}

} // namespace

classification_report classify(const structure& b, const classify_caps& caps) {
    classification_report r;
    r.structure_name = b.name();
    r.structure_hash = structure_hash(b);
    r.caps = caps;
    r.m = std::max(1, b.sig().max_arity());
    r.k0 = r.m * b.size();
    r.n0 = r.m * binomial(b.size(), b.size() / 2);

    try {
        phase_timer t(r.timing_ms, "tree_duality");
        auto ts = totally_symmetric_check(b);
        r.tree_duality = {ts.holds ? verdict_value::yes : verdict_value::no, "totally_symmetric",
                          ts.holds ? "power structure maps to the template" : "power structure does not map"};
        r.totally_symmetric = std::move(ts);
    } catch (const cap_exceeded& e) {
        r.tree_duality = {verdict_value::inconclusive, "", e.what()};
    }

    try {
        phase_timer t(r.timing_ms, "quasi_maltsev");
        auto qm = find_polymorphism_satisfying(b, minor_condition::quasi_maltsev(), caps.dense);
        r.quasi_maltsev = {qm ? verdict_value::yes : verdict_value::no, qm ? "quasi_maltsev" : "",
                           qm ? "verified table" : "indicator structure does not map to the template"};
        r.quasi_maltsev_table = std::move(qm);
    } catch (const cap_exceeded& e) {
        r.quasi_maltsev = {verdict_value::inconclusive, "", e.what()};
    }

    decide_lam(b, caps, r);

    if (r.quasi_maltsev.value == verdict_value::no || r.caterpillar_lam.value == verdict_value::no)
        r.slam = {verdict_value::no, "", r.quasi_maltsev.value == verdict_value::no ? "no quasi Maltsev polymorphism"
                                                                                      : "not solvable by linear arc monadic Datalog"};
    else if (r.quasi_maltsev.value == verdict_value::yes && r.caterpillar_lam.value == verdict_value::yes)
        r.slam = {verdict_value::yes, "program", "quasi Maltsev and caterpillar duality"};
    else
        r.slam = {verdict_value::inconclusive, "", "a component verdict is inconclusive"};
    return r;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson table_json(const operation_table& t) {
    ojson j;
    j["arity"] = t.arity;
    j["domain"] = t.domain;
    if (t.values.size() <= 4096) {
        j["values"] = t.values;
    } else {
        std::uint64_t h = 1469598103934665603ull;
        for (int v : t.values) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 1099511628211ull;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        j["entries"] = t.values.size();
        j["values_fnv1a"] = buf;
    }
    return j;
}

ojson verdict_json(const verdict& v) {
    ojson j;
    j["value"] = to_string(v.value);
    j["witness"] = v.witness.empty() ? ojson(nullptr) : ojson(v.witness);
    j["note"] = v.note;
    return j;
}

} // namespace

std::string report_json(const classification_report& r, bool include_timing) {
    ojson j;
    j["structure"] = {{"name", r.structure_name}, {"hash", r.structure_hash}};
    j["m"] = r.m;
    j["k0"] = r.k0;
    j["n0"] = r.n0;
    j["verdicts"] = {{"tree_duality", to_string(r.tree_duality.value)},
                     {"caterpillar_lam", to_string(r.caterpillar_lam.value)},
                     {"slam", to_string(r.slam.value)}};
    j["details"] = {{"tree_duality", verdict_json(r.tree_duality)},
                    {"quasi_maltsev", verdict_json(r.quasi_maltsev)},
                    {"caterpillar_lam", verdict_json(r.caterpillar_lam)},
                    {"slam", verdict_json(r.slam)}};
    ojson w = ojson::object();
    if (r.totally_symmetric && r.totally_symmetric->map) {
        ojson ts;
        ts["power_size"] = r.totally_symmetric->power.result.size();
        ts["subsets"] = r.totally_symmetric->power.elements;
        ts["map"] = *r.totally_symmetric->map;
        w["totally_symmetric"] = ts;
    }
    if (r.quasi_maltsev_table) w["quasi_maltsev"] = table_json(*r.quasi_maltsev_table);
    if (r.lattice) {
        ojson l;
        l["on_core"] = r.lattice_on_core;
        l["leq"] = ojson::array();
        for (const auto& row : r.lattice->leq) {
            ojson jr = ojson::array();
            for (char c : row) jr.push_back(c != 0);
            l["leq"].push_back(jr);
        }
        l["join"] = table_json(r.lattice->join);
        l["meet"] = table_json(r.lattice->meet);
        w["lattice"] = l;
    }
    if (r.absorptive) {
        const auto& a = *r.absorptive;
        ojson ab;
        ab["k"] = a.k;
        ab["n"] = a.n;
        ab["strategy"] = a.strategy == absorptive_strategy::dense ? "dense" : "setsystem";
        ab["holds"] = a.result.holds;
        if (a.result.table) ab["table"] = table_json(*a.result.table);
        if (a.result.systems) ab["systems"] = a.result.systems->result.size();
        if (a.result.system_map) ab["map"] = *a.result.system_map;
        w["absorptive"] = ab;
    }
    if (r.slam.value == verdict_value::yes) w["program"] = "canonical slam program (canon --fragment slam)";
    j["witnesses"] = w;
    if (include_timing) {
        ojson t = ojson::object();
        for (const auto& [k, v] : r.timing_ms) t[k] = v;
        j["timing_ms"] = t;
    }
    j["caps"] = {{"dense", r.caps.dense}, {"max_k", r.caps.max_k}, {"max_n", r.caps.max_n}};
    if (r.caterpillar_lam.value == verdict_value::inconclusive)
        j["frontier"] = {{"k", r.frontier.first}, {"n", r.frontier.second}};
    return j.dump(2);
}

program emit_slam(const structure& b, const classify_caps& caps) {
    auto r = classify(b, caps);
    if (r.slam.value != verdict_value::yes)
        throw not_slam("CSP(" + (b.name().empty() ? std::string("B") : b.name()) + ") is not known to be solvable by slam Datalog: " +
                       to_string(r.slam.value) + " (" + r.slam.note + ")");
    return canonical_program(b, fragment::slam);
}

} // namespace slam
