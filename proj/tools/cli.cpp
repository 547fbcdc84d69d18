#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "qkdrates/capacity.hpp"
#include "qkdrates/channels.hpp"
#include "qkdrates/errors.hpp"
#include "qkdrates/keyrates.hpp"
#include "qkdrates/optimize.hpp"
#include "qkdrates/parallel.hpp"
#include "qkdrates/schur_efm.hpp"

namespace qkdrates::cli {
namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string protocol = "bb84";
    bool capacity = false;
    bool iterated = false;
    int m = 1;
    int m1 = 1;
    int m2 = 1;
    std::optional<double> p;
    std::string p_range;
    std::optional<double> q;
    std::optional<double> Q;
    bool optimize = false;
    double tol_q = 1e-6;
    double tol_p = 1e-7;
    double lo = 1e-4;
    double hi = 0.2;
    std::optional<double> hi_extended;
    double class_budget = kDefaultClassBudget;
    int n = 2;
    int levels = 2;
    unsigned threads = 0;
    std::string format = "csv";
    std::string output;
};

std::string fixed7(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.7f", v);
    return buf;
}

ProtocolKind protocol_kind(const RunConfig& cfg) {
    return cfg.protocol == "six-state" ? ProtocolKind::SixState : ProtocolKind::BB84;
}

std::vector<double> p_samples(const RunConfig& cfg) {
    if (cfg.p) return {*cfg.p};
    std::vector<double> parts;
    std::stringstream ss(cfg.p_range);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("--p-range expects start:stop:step, got '" + cfg.p_range + "'");
        }
    }
    if (parts.size() != 3 || parts[2] <= 0.0 || parts[1] < parts[0])
        throw UsageError("--p-range expects start:stop:step with step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 0.5));
    std::vector<double> out;
    for (long i = 0; i <= count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return out;
}

Json config_json(const RunConfig& cfg) {
    Json j;
    j["command"] = cfg.command;
    if (cfg.command == "rate" || (cfg.command == "pmax" && !cfg.capacity)) {
        j["protocol"] = cfg.protocol;
        j["iterated"] = cfg.iterated;
        if (cfg.iterated) {
            j["m1"] = cfg.m1;
            j["m2"] = cfg.m2;
        } else {
            j["m"] = cfg.m;
        }
        j["optimize"] = cfg.optimize;
        if (!cfg.optimize) {
            j["q"] = cfg.q.value_or(0.0);
            if (cfg.iterated) j["Q"] = cfg.Q.value_or(0.0);
        }
    }
    if (cfg.command == "capacity" || (cfg.command == "pmax" && cfg.capacity)) {
        j["capacity"] = true;
        j["m1"] = cfg.m1;
        j["m2"] = cfg.m2;
    }
    if (cfg.command == "rate" || cfg.command == "capacity") {
        if (cfg.p)
            j["p"] = *cfg.p;
        else
            j["p_range"] = cfg.p_range;
    }
    if (cfg.command == "pmax") j["tol_p"] = cfg.tol_p;
    if (cfg.command == "schur") {
        j["n"] = cfg.n;
        j["q"] = cfg.levels;
    }
    return j;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_table(const RunConfig& cfg, const Table& t, std::ostream& out) {
    if (cfg.format == "json") {
        Json doc;
        doc["config"] = config_json(cfg);
        Json rows = Json::array();
        for (const auto& r : t.rows) {
            Json row;
            for (std::size_t i = 0; i < t.header.size(); ++i) row[t.header[i]] = r[i];
            rows.push_back(row);
        }
        doc["rows"] = rows;
        out << doc.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << fixed7(r[i]);
        out << '\n';
    }
}

void require_protocol_args(const RunConfig& cfg) {
    if (cfg.iterated && cfg.protocol != "bb84") throw UsageError("--iterated is only defined for bb84");
    if (cfg.optimize && (cfg.q || cfg.Q)) throw UsageError("--optimize-q excludes fixed --q/--Q");
    if (cfg.Q && !cfg.iterated) throw UsageError("--Q needs --iterated");
}

RateResult evaluate(const RunConfig& cfg, double p, double q, double Q) {
    if (cfg.iterated) return bb84_iter_rate(cfg.m1, cfg.m2, p, q, Q);
    return protocol_kind(cfg) == ProtocolKind::SixState ? sixstate_rate(cfg.m, p, q) : bb84_rate(cfg.m, p, q);
}

int cmd_rate(const RunConfig& cfg, std::ostream& out) {
    require_protocol_args(cfg);
    Table t{{"p", "q", "Q", "rate", "i_xy", "i_xe"}, {}};
    for (double p : p_samples(cfg)) {
        double q = cfg.q.value_or(0.0), Q = cfg.Q.value_or(0.0);
        if (cfg.optimize) {
            OptResult best;
            if (cfg.iterated)
                best = maximize_qQ([&](double a, double b) { return evaluate(cfg, p, a, b).rate; }, cfg.tol_q);
            else
                best = maximize_q([&](double a) { return evaluate(cfg, p, a, 0.0).rate; }, cfg.tol_q);
            if (!best.converged) throw ConvergenceError("optimizer did not converge at p=" + fixed7(p));
            q = best.q;
            Q = best.Q;
        }
        const RateResult r = evaluate(cfg, p, q, Q);
        t.rows.push_back({p, q, Q, r.rate, r.i_xy, r.i_xe});
    }
    write_table(cfg, t, out);
    return kOk;
}

int cmd_pmax(const RunConfig& cfg, std::ostream& out) {
    double pmax = 0.0;
    if (cfg.capacity) {
        pmax = pmax_capacity(cfg.m1, cfg.m2, cfg.tol_p, cfg.class_budget);
    } else {
        require_protocol_args(cfg);
        PmaxQuery query;
        query.kind = protocol_kind(cfg);
        query.iterated = cfg.iterated;
        query.m = cfg.m;
        query.m1 = cfg.m1;
        query.m2 = cfg.m2;
        query.mode.optimize = cfg.optimize;
        query.mode.q = cfg.q.value_or(0.0);
        query.mode.Q = cfg.Q.value_or(0.0);
        query.tol_p = cfg.tol_p;
        query.bracket.lo = cfg.lo;
        query.bracket.hi = cfg.hi;
        query.bracket.hi_extended = cfg.hi_extended;
        pmax = pmax_search(query);
    }
    if (cfg.format == "json") {
        Json doc;
        doc["config"] = config_json(cfg);
        doc["pmax"] = pmax;
        out << doc.dump(2) << '\n';
        return kOk;
    }
    out << "protocol,m1,m2,iterated,optimize,q,Q,pmax\n";
    if (cfg.capacity) {
        out << "capacity," << cfg.m1 << ',' << cfg.m2 << ",0,0,,," << fixed7(pmax) << '\n';
    } else {
        const int m1 = cfg.iterated ? cfg.m1 : cfg.m;
        const int m2 = cfg.iterated ? cfg.m2 : 1;
        out << cfg.protocol << ',' << m1 << ',' << m2 << ',' << int(cfg.iterated) << ',' << int(cfg.optimize) << ',';
        if (cfg.optimize)
            out << ",,";
        else
            out << fixed7(cfg.q.value_or(0.0)) << ',' << fixed7(cfg.Q.value_or(0.0)) << ',';
        out << fixed7(pmax) << '\n';
    }
    return kOk;
}

int cmd_capacity(const RunConfig& cfg, std::ostream& out) {
    Table t{{"p", "rate"}, {}};
    for (double p : p_samples(cfg)) t.rows.push_back({p, conc_rate({cfg.m1, cfg.m2, depolarizing(p), cfg.class_budget})});
    write_table(cfg, t, out);
    return kOk;
}

std::string state_string(std::uint64_t index, int n, int q) {
    static const char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::string s;
    for (int letter : state_letters(index, n, q)) s.push_back(digits[letter]);
    return s;
}

int cmd_schur(const RunConfig& cfg, std::ostream& out) {
    const SchurBasis basis = schur_basis(cfg.n, cfg.levels);
    Json vectors = Json::array();
    for (const auto& v : basis.vectors) {
        Json j;
        j["nu"] = v.nu;
        j["gelfand"] = v.gelfand;
        j["tableau"] = v.tableau;
        j["weyl"] = v.weyl;
        Json coeffs = Json::array();
        for (const auto& [idx, a] : v.coeffs) coeffs.push_back(Json::array({state_string(idx, cfg.n, cfg.levels), a, 0.0}));
        j["coeffs"] = coeffs;
        vectors.push_back(j);
    }
    Json doc;
    doc["config"] = config_json(cfg);
    doc["vectors"] = vectors;
    out << doc.dump(2) << '\n';
    return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = hardware count)");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", cfg.output, "Write results to this file instead of stdout");
}

void add_protocol(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--protocol", cfg.protocol, "bb84 or six-state")->check(CLI::IsMember({"bb84", "six-state"}));
    sub->add_option("--m", cfg.m, "Block length")->check(CLI::PositiveNumber);
    sub->add_flag("--iterated", cfg.iterated, "Two-round preprocessing (bb84 only)");
    sub->add_option("--m1", cfg.m1, "Inner block length")->check(CLI::PositiveNumber);
    sub->add_option("--m2", cfg.m2, "Outer block length")->check(CLI::PositiveNumber);
    sub->add_option("--q", cfg.q, "Noise added to each bit")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--Q", cfg.Q, "Noise added to each block key bit")->check(CLI::Range(0.0, 1.0));
    sub->add_flag("--optimize-q", cfg.optimize, "Maximize over q (and Q when iterated) at each p");
    sub->add_option("--tol-q", cfg.tol_q, "Optimizer tolerance in q")->check(CLI::PositiveNumber);
}

void add_p(CLI::App* sub, RunConfig& cfg) {
    auto* p = sub->add_option("--p", cfg.p, "Bit-error rate")->check(CLI::Range(0.0, 1.0));
    auto* range = sub->add_option("--p-range", cfg.p_range, "start:stop:step");
    p->excludes(range);
    range->excludes(p);
    sub->require_option(1, 0);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Asymptotic secret-key rates and depolarizing-channel capacity bounds"};
    app.name("qkdrates");
    app.require_subcommand(1);
    RunConfig cfg;

    auto* rate = app.add_subcommand("rate", "Key rate at one or more bit-error rates");
    add_protocol(rate, cfg);
    add_p(rate, cfg);
    add_common(rate, cfg);

    auto* pmax = app.add_subcommand("pmax", "Largest bit-error rate with a positive rate");
    add_protocol(pmax, cfg);
    pmax->add_flag("--capacity", cfg.capacity, "Threshold of the concatenated cat code on the depolarizing channel");
    pmax->add_option("--tol-p", cfg.tol_p, "Bisection tolerance")->check(CLI::PositiveNumber);
    pmax->add_option("--lo", cfg.lo, "Bracket start");
    pmax->add_option("--hi", cfg.hi, "Bracket end");
    pmax->add_option("--hi-extended", cfg.hi_extended, "Fallback bracket end");
    pmax->add_option("--class-budget", cfg.class_budget, "Syndrome class limit");
    add_common(pmax, cfg);

    auto* cap = app.add_subcommand("capacity", "Concatenated cat code rate on the depolarizing channel");
    cap->add_option("--m1", cfg.m1, "Inner block length")->check(CLI::PositiveNumber);
    cap->add_option("--m2", cfg.m2, "Outer block length")->check(CLI::PositiveNumber);
    cap->add_option("--class-budget", cfg.class_budget, "Syndrome class limit");
    add_p(cap, cfg);
    add_common(cap, cfg);

    auto* schur = app.add_subcommand("schur", "Schur basis of n sites with q levels, as JSON");
    schur->add_option("--n", cfg.n, "Number of sites")->required();
    schur->add_option("--q", cfg.levels, "Levels per site")->required();
    schur->add_option("--emit", cfg.output, "Write the basis to this file");
    schur->add_option("--threads", cfg.threads, "Worker threads (0 = hardware count)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    if (cfg.command == "schur") cfg.format = "json";

    std::ofstream file;
    if (!cfg.output.empty()) {
        file.open(cfg.output);
        if (!file) {
            err << "cannot open " << cfg.output << '\n';
            return kUsage;
        }
    }
    std::ostream& sink = cfg.output.empty() ? out : file;

    const unsigned saved_threads = thread_count();
    set_thread_count(cfg.threads);
    int code = kFailure;
    try {
        if (cfg.command == "rate") code = cmd_rate(cfg, sink);
        if (cfg.command == "pmax") code = cmd_pmax(cfg, sink);
        if (cfg.command == "capacity") code = cmd_capacity(cfg, sink);
        if (cfg.command == "schur") code = cmd_schur(cfg, sink);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        code = kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        code = kUsage;
    } catch (const UnsupportedRangeError& e) {
        err << "error: " << e.what() << '\n';
        code = kUsage;
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << '\n';
        code = kBudget;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        code = kNoConvergence;
    }
    set_thread_count(saved_threads);
    return code;
}

}  // namespace qkdrates::cli
