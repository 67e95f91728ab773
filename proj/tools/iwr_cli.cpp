#include "iwr/iwr.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>

using namespace iwr;
using json = nlohmann::ordered_json;

namespace {

struct JobConfig {
    std::int64_t p = 0;
    std::string precision = "8";
    std::string cache_dir;
    std::string out;
    std::string newform;
    std::vector<std::string> chars;
    std::string branches;
    std::string data_dir = default_data_dir();
    int weight = 2;
    std::int64_t terms = 30;
    int level_n = 1;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_precision(const std::string& s, std::int64_t p) {
    std::smatch m;
    static const std::regex re(R"(^\s*(\d+)\s*(?:,\s*(\d+))?\s*$)");
    if (!std::regex_match(s, m, re)) throw ConfigError("--precision expects M or M,D");
    int M = std::stoi(m[1]);
    int D = m[2].matched ? std::stoi(m[2]) : static_cast<int>(p);
    if (M < 2 || D < 1) throw ConfigError("--precision: need M >= 2 and D >= 1");
    return {M, D};
}

std::pair<std::int64_t, std::int64_t> parse_branches(const std::string& s, std::int64_t p) {
    if (s.empty()) return {0, p - 2};
    std::smatch m;
    static const std::regex re(R"(^\s*(-?\d+)\s*(?:\.\.\s*(-?\d+))?\s*$)");
    if (!std::regex_match(s, m, re)) throw ConfigError("--branches expects a..b");
    std::int64_t a = std::stoll(m[1]);
    std::int64_t b = m[2].matched ? std::stoll(m[2]) : a;
    if (b < a || b - a > p - 2) throw ConfigError("--branches: range must cover at most p - 1 branches");
    return {a, b};
}

void require_prime_flag(const JobConfig& c) {
    if (c.p == 0) throw ConfigError("--prime is required");
    if (c.p < 3 || !is_prime(c.p)) throw ConfigError("--prime must be an odd prime");
}

NewformData require_newform(const JobConfig& c) {
    if (c.newform.empty()) throw ConfigError("--newform is required");
    auto f = load_newform(c.newform);
    validate_newform(f);
    return f;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("cannot open " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
    void line(const json& j) { os() << j.dump() << "\n"; }

private:
    std::ofstream file_;
};

void scope_line(Output& out) {
    json j;
    j["scope"] = kScopeStatement;
    out.line(j);
}

int cmd_chars(const JobConfig& c) {
    if (c.chars.empty()) throw ConfigError("--char is required");
    Output out(c.out);
    for (auto& d : c.chars) {
        auto chi = parse_character(d);
        auto G = gauss_sum(chi.primitive());
        json j;
        j["descriptor"] = chi.descriptor();
        j["modulus"] = chi.modulus();
        j["conductor"] = chi.conductor();
        j["primitive"] = chi.primitive().descriptor();
        j["parity"] = chi.parity();
        j["order"] = chi.minimized().value_order();
        j["gauss_sum"] = G.str();
        j["gauss_norm_ok"] = (G * gauss_sum(chi.primitive().conj())) ==
                             CyclotomicNumber::rational(Rational(chi.parity() * chi.conductor()), G.order());
        if (c.p) {
            auto [chi0, chip] = decompose_p_part(chi.primitive(), c.p);
            j["prime_to_p"] = chi0.descriptor();
            j["p_part"] = chip.descriptor();
            j["gauss_factorization_ok"] = gauss_factorization_check(chi.primitive(), c.p);
        }
        out.line(j);
    }
    return 0;
}

int cmd_eisenstein(const JobConfig& c) {
    if (c.chars.size() != 2) throw ConfigError("eisenstein needs --char theta --char phi");
    auto theta = parse_character(c.chars[0]);
    auto phi = parse_character(c.chars[1]);
    auto g = eisenstein_series(theta, phi, c.weight, c.terms);
    Output out(c.out);
    json head;
    head["weight"] = g.weight;
    head["level"] = g.level;
    head["nebentypus"] = g.nebentypus.descriptor();
    out.line(head);
    for (std::int64_t n = 0; n <= g.n_max(); ++n) {
        json j;
        j["n"] = n;
        j["a"] = g[n].str();
        out.line(j);
    }
    return 0;
}

int cmd_congruence(const JobConfig& c) {
    require_prime_flag(c);
    auto h = require_newform(c);
    Output out(c.out);
    VerificationReport rep;
    rep.subject = "congruence " + h.label + " at " + std::to_string(c.p);
    auto d = derive_residual_data(h, c.p, 200);
    if (!d) {
        rep.add_failure("congruence.residual", "residual representation xi1 + xi2", "no residual splitting found");
        out.os() << rep.to_jsonl();
        return 1;
    }
    Sigma0 s0 = sigma0_and_m(d->I0, d->M0);
    std::int64_t pm = c.p * s0.m;
    std::int64_t bound = sturm_bound(2, lcm(h.level, pm) * pm);
    CongruenceIdealSpec I = h.field_poly.size() == 2 ? CongruenceIdealSpec::rational(c.p)
                                                     : CongruenceIdealSpec{c.p, h.seed(c.p), h.field_poly};
    if (h.n_max() < bound) throw IngestionError(h.label + ": coefficients stop before the Sturm bound " +
                                                std::to_string(bound));
    auto partner = residual_eisenstein_partner(*d, 2, bound);
    auto r = check_congruence(deplete(h.qexpansion(), pm), deplete(partner.g, pm), I, bound);
    json det;
    det["xi1"] = partner.xi1.descriptor();
    det["xi2"] = partner.xi2.descriptor();
    json primes = json::array();
    for (auto l : partner.sigma0.primes) primes.push_back(l);
    det["sigma0"] = primes;
    det["m"] = partner.sigma0.m;
    det["sturm_bound"] = bound;
    rep.details.push_back(det);
    rep.add("congruence.depleted", "h|iota_pm = g|iota_pm mod pi", r.congruent(),
            std::to_string(r.mismatches.size()) + " mismatches for n <= " + std::to_string(bound), "0 mismatches",
            "exact");
    out.os() << rep.to_jsonl();
    return rep.passed() ? 0 : 1;
}

struct FormJob {
    NewformData E;
    DirichletCharacter chi;
    std::string twist;
    SymbolPair sym;
    std::int64_t level = 1;
};

FormJob form_job(const JobConfig& c) {
    require_prime_flag(c);
    FormJob job{require_newform(c), DirichletCharacter::trivial(1), "triv1", {}, 1};
    if (job.E.field_poly.size() != 2) throw ConfigError("modular symbols need a rational newform");
    if (c.chars.size() > 1) throw ConfigError("at most one --char twist");
    if (!c.chars.empty()) {
        job.twist = c.chars[0];
        job.chi = parse_character(c.chars[0]);
    }
    std::int64_t C = job.chi.conductor();
    if (gcd(C, job.E.level) != 1) throw ConfigError("twist conductor must be prime to the level");
    if (C > 1 && job.chi.minimized().value_order() > 2) throw ConfigError("only quadratic twists are supported");
    job.sym = twisted_symbols(newform_symbols(job.E, resolve_cache_dir(c.cache_dir)), job.chi);
    job.level = job.E.level * C * C;
    return job;
}

BranchForm branch_form(const FormJob& job, std::int64_t p, int M) {
    Integer ap = rational_coefficient(job.E, p);
    if (job.chi.conductor() > 1) ap *= job.chi.primitive().sign_value(p);
    return make_branch_form(job.E.label, job.sym.plus, job.sym.minus, job.level, p, ap, M + 4, job.twist);
}

int cmd_modsym_table(const JobConfig& c) {
    auto job = form_job(c);
    Output out(c.out);
    for (int sgn : {1, -1}) {
        const auto& x = job.sym(sgn);
        json j;
        j["form"] = job.E.label;
        j["twist"] = job.twist;
        j["sign"] = sgn;
        j["normalization"] = x.normalization.get_str();
        json t = json::array();
        for (auto& v : symbol_table(x, c.p)) t.push_back(v.get_str());
        j["table"] = t;
        out.line(j);
    }
    return 0;
}

int cmd_padic_l(const JobConfig& c, bool series) {
    auto job = form_job(c);
    auto [M, D] = parse_precision(c.precision, c.p);
    auto [ja, jb] = parse_branches(c.branches, c.p);
    auto f = branch_form(job, c.p, M);
    IwasawaContext ctx = IwasawaContext::make(c.p, M, D);
    Output out(c.out);
    scope_line(out);
    for (std::int64_t j = ja; j <= jb; ++j) {
        auto v = branch_value_trivial(f, j, M);
        json r;
        r["form"] = f.label;
        r["twist"] = f.twist;
        r["j"] = v.j;
        r["alpha"] = f.alpha.str();
        r["value_at_trivial"] = value_json(v);
        if (series) {
            auto bs = branch_series(f, v.j, c.level_n, ctx);
            r["series"] = bs.series.serialize();
            try {
                auto w = invariants(bs.series);
                r["mu"] = w.mu;
                r["lambda"] = w.lambda;
                r["class_mod_pi"] = ideal_mod_pi(bs.series).str();
            } catch (const PrecisionError& e) {
                r["mu"] = nullptr;
                r["lambda"] = nullptr;
                r["error"] = e.what();
            }
        }
        r["sigma0_factors"] = json::array();
        out.line(r);
    }
    return 0;
}

int cmd_verify(const JobConfig& c, int n) {
    ExampleOptions opt;
    opt.data_dir = c.data_dir;
    opt.cache_dir = c.cache_dir;
    auto [M, D] = parse_precision(c.precision, example_spec(n).p);
    opt.M = M;
    opt.D = D;
    opt.level_n = c.level_n;
    auto res = run_example(n, opt);
    Output out(c.out);
    out.os() << res.report.to_jsonl();
    return res.report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eisenstein-prime Iwasawa toolkit"};
    app.require_subcommand(1);
    JobConfig cfg;
    auto common = [&](CLI::App* s) {
        s->add_option("--prime", cfg.p, "odd prime p");
        s->add_option("--precision", cfg.precision, "M or M,D");
        s->add_option("--cache-dir", cfg.cache_dir, "modular-symbol cache (default $IWR_CACHE)");
        s->add_option("--out", cfg.out, "output file (default stdout)");
        s->add_option("--newform", cfg.newform, "newform coefficient file");
        s->add_option("--char", cfg.chars, "character descriptor");
        s->add_option("--branches", cfg.branches, "branch range a..b");
        s->add_option("--data-dir", cfg.data_dir, "directory of bundled newform files");
        s->add_option("--level-n", cfg.level_n, "Riemann-sum level n")->check(CLI::Range(1, 3));
    };
    auto* chars = app.add_subcommand("chars", "character data");
    auto* eis = app.add_subcommand("eisenstein", "Eisenstein series q-expansion");
    eis->add_option("--weight", cfg.weight, "weight l")->check(CLI::Range(1, 12));
    eis->add_option("--terms", cfg.terms, "number of terms")->check(CLI::Range(1, 100000));
    auto* cong = app.add_subcommand("congruence", "h against its Eisenstein partner");
    auto* table = app.add_subcommand("modsym-table", "x^+/- (b/p) tables");
    auto* padic = app.add_subcommand("padic-l", "branch values at the trivial character");
    auto* iwa = app.add_subcommand("iwasawa", "branch series and mu/lambda");
    auto* ver = app.add_subcommand("verify-example", "end-to-end check of example 1, 2 or 3");
    int example = 0;
    ver->add_option("n", example, "example number")->required()->check(CLI::Range(1, 3));
    for (auto* s : {chars, eis, cong, table, padic, iwa, ver}) common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (*chars) return cmd_chars(cfg);
        if (*eis) return cmd_eisenstein(cfg);
        if (*cong) return cmd_congruence(cfg);
        if (*table) return cmd_modsym_table(cfg);
        if (*padic) return cmd_padic_l(cfg, false);
        if (*iwa) return cmd_padic_l(cfg, true);
        if (*ver) return cmd_verify(cfg, example);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IngestionError& e) {
        std::cerr << "ingestion error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
