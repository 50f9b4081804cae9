#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

#include "sfd/io.hpp"

using namespace sfd;
using nlohmann::json;

namespace {

void emit(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

int cmd_build(const std::string& spec_path, const std::string& out_path, long precision_bits) {
    FieldSpec spec = parse_field_spec(load_json_file(spec_path));
    if (precision_bits > 0) spec.precision_bits = precision_bits;
    SignedDomain dom = build_from_spec(spec);
    emit(domain_to_json(dom), out_path);
    std::cerr << "built " << dom.cones.size() << " cones (" << dom.nonzero_cone_count()
              << " with mu != 0), degree constant " << dom.degree_constant << "\n";
    return 0;
}

int cmd_verify(const std::string& domain_path, const std::string& out_path,
               std::optional<int> samples, std::optional<std::uint64_t> seed,
               const std::string& bound, std::optional<double> tolerance, int lambda_samples,
               int threads) {
    SignedDomain dom = domain_from_json(load_json_file(domain_path));
    VerifyOptions opt;
    // flags override the defaults carried in the domain file
    opt.samples = samples.value_or(dom.default_samples);
    opt.seed = seed.value_or(dom.default_seed);
    opt.tol = tolerance.value_or(dom.default_tolerance);
    opt.lambda_samples = lambda_samples;
    opt.threads = threads;
    if (bound != "auto") opt.bound = std::stoi(bound);
    VerifyReport rep = run_property_suite(dom, opt);
    emit(report_to_json(rep), out_path);
    auto line = [](const char* name, bool ok) {
        std::cerr << (ok ? "PASS " : "FAIL ") << name << "\n";
    };
    line("signed-counts-all-one", rep.counts_all_one);
    line("bound-stability", rep.stability_pass);
    line("lambda-complex", rep.lambda_pass);
    line("sector-containment", rep.sectors_pass);
    line("y-nonvanishing", rep.y_nonzero_pass);
    line("mu-relabeling-invariance", rep.mu_relabeling_pass);
    line("detW-coherence", rep.det_coherence_pass);
    line("e-invariance", rep.e_invariance_pass);
    return rep.all_pass() ? 0 : 1;
}

int cmd_twister_construct(const std::string& spec_path, const std::string& out_path,
                          double margin, long denom_bound) {
    FieldSpec spec = parse_field_spec(load_json_file(spec_path));
    auto field = std::make_shared<NumberField>(spec.min_poly, spec.precision_bits);
    Twister tw = construct_twister(field, spec.N, margin, denom_bound);
    TwisterReport rep = validate_twister(*field, tw);
    emit(twister_to_json(tw), out_path);
    std::cerr << (rep.all_ok ? "valid" : "INVALID") << " twister, min slack " << rep.min_slack
              << "\n";
    return rep.all_ok ? 0 : 1;
}

int cmd_twister_validate(const std::string& path) {
    json j = load_json_file(path);
    std::shared_ptr<const NumberField> field;
    Twister tw;
    if (j.contains("schema") && j["schema"] == kDomainSchema) {
        SignedDomain dom = domain_from_json(j);
        field = dom.field;
        tw = dom.twister;
    } else {
        FieldSpec spec = parse_field_spec(j);
        if (!spec.twister.has_value())
            throw SchemaError("spec has no explicit twister table to validate");
        auto f = std::make_shared<NumberField>(spec.min_poly, spec.precision_bits);
        Twister t(f, spec.N);
        for (const auto& [cls, coords] : *spec.twister) t.set_entry(cls, f->element(coords));
        field = f;
        tw = std::move(t);
    }
    TwisterReport rep = validate_twister(*field, tw);
    json out;
    out["complete"] = rep.complete;
    out["all_ok"] = rep.all_ok;
    out["min_slack"] = rep.min_slack;
    json entries = json::array();
    for (const auto& e : rep.entries) {
        json je;
        je["class"] = e.cls;
        je["totally_positive"] = e.totally_positive;
        je["ok"] = e.ok;
        je["slack"] = e.slack;
        entries.push_back(std::move(je));
    }
    out["entries"] = std::move(entries);
    std::cout << out.dump(2) << "\n";
    return rep.all_ok ? 0 : 1;
}

int cmd_plot(const std::string& domain_path, const std::string& out_path, int place,
             bool real_slice) {
    SignedDomain dom = domain_from_json(load_json_file(domain_path));
    const NumberField& k = *dom.field;
    if (dom.cones.empty()) throw SchemaError("domain file has no cones");
    std::ostringstream csv;
    if (real_slice) {
        if (k.degree() > 3) throw SchemaError("--real-slice requires degree <= 3");
        csv << "cone,generator";
        for (int j = 0; j < k.r1(); ++j) csv << ",x" << (j + 1);
        csv << ",mu\n";
        for (const auto& c : dom.cones)
            for (size_t g = 0; g < c.generators.size(); ++g) {
                csv << c.alpha << "," << g;
                for (int j = 0; j < k.r1(); ++j)
                    csv << "," << k.embed_real(c.generators[g], j, 64).mid_double();
                csv << "," << c.mu << "\n";
            }
    } else {
        if (place < 1 || place > k.r1() + k.r2())
            throw SchemaError("--place must be in 1.." + std::to_string(k.r1() + k.r2()));
        if (place <= k.r1()) {
            csv << "cone,generator,value,mu\n";
            for (const auto& c : dom.cones)
                for (size_t g = 0; g < c.generators.size(); ++g)
                    csv << c.alpha << "," << g << ","
                        << k.embed_real(c.generators[g], place - 1, 64).mid_double() << ","
                        << c.mu << "\n";
        } else {
            csv << "cone,generator,re,im,mu\n";
            for (const auto& c : dom.cones)
                for (size_t g = 0; g < c.generators.size(); ++g) {
                    CInterval z = k.embed_complex(c.generators[g], place - 1 - k.r1(), 64);
                    csv << c.alpha << "," << g << "," << z.re().mid_double() << ","
                        << z.im().mid_double() << "," << c.mu << "\n";
                }
        }
    }
    if (out_path.empty())
        std::cout << csv.str();
    else
        write_text_file(out_path, csv.str());
    return 0;
}

int cmd_info(const std::string& domain_path) {
    SignedDomain dom = domain_from_json(load_json_file(domain_path));
    const NumberField& k = *dom.field;
    std::cout << "degree " << k.degree() << ", signature (" << k.r1() << "," << k.r2() << ")\n";
    std::cout << "units: " << dom.units.size() << ", sector counts:";
    for (auto n : dom.N) std::cout << " " << n;
    std::cout << "\ncones: " << dom.cones.size() << " (" << dom.nonzero_cone_count()
              << " with mu != 0)\n";
    int plus = 0, minus = 0;
    for (const auto& c : dom.cones) {
        if (c.mu > 0) ++plus;
        if (c.mu < 0) ++minus;
    }
    std::cout << "mu: +" << plus << " / -" << minus << "\n";
    std::cout << "degree constant " << dom.degree_constant << ", det R sign " << dom.det_R_sign
              << ", basis embedding sign " << dom.basis_embedding_sign << "\n";
    std::cout << "twister entries: " << dom.twister.size() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"signed fundamental domains for the action of totally positive units"};
    app.require_subcommand(1);

    std::string spec_path, domain_path, out_path, bound = "auto", tw_path;
    long precision_bits = 0, denom_bound = 16;
    int samples = 1000, lambda_samples = 10000, place = 0, threads = 0;
    std::uint64_t seed = 42;
    double tolerance = 1e-30, margin = 0.25;
    bool real_slice = false;

    auto* b = app.add_subcommand("build", "construct a signed fundamental domain");
    b->add_option("spec", spec_path, "field spec JSON file")->required();
    b->add_option("--out", out_path, "output path (default stdout)");
    b->add_option("--precision-bits", precision_bits, "override working precision");

    auto* v = app.add_subcommand("verify", "run the verification suite on a domain file");
    v->add_option("domain", domain_path, "domain JSON file")->required();
    v->add_option("--samples", samples, "orbit-count samples");
    v->add_option("--seed", seed, "RNG seed");
    v->add_option("--bound", bound, "exponent box bound: auto or an integer");
    v->add_option("--tolerance", tolerance, "membership tolerance");
    v->add_option("--lambda-samples", lambda_samples, "lattice-cell coverage samples");
    v->add_option("--threads", threads, "worker threads (0 = hardware)");
    v->add_option("--out", out_path, "report output path (default stdout)");

    auto* t = app.add_subcommand("twister", "construct or validate twister tables");
    t->require_subcommand(1);
    auto* tc = t->add_subcommand("construct", "build a twister from a field spec");
    tc->add_option("spec", spec_path, "field spec JSON file")->required();
    tc->add_option("--margin", margin, "relative window slack required");
    tc->add_option("--denom-bound", denom_bound, "initial denominator bound");
    tc->add_option("--out", out_path, "output path (default stdout)");
    auto* tv = t->add_subcommand("validate", "validate the table in a domain or spec file");
    tv->add_option("file", tw_path, "domain or spec JSON file")->required();

    auto* p = app.add_subcommand("plot", "emit generator data as CSV");
    p->add_option("domain", domain_path, "domain JSON file")->required();
    p->add_option("--place", place, "1-based place index for per-place data");
    p->add_flag("--real-slice", real_slice, "real-coordinate projection (degree <= 3)");
    p->add_option("--out", out_path, "output path (default stdout)");

    auto* i = app.add_subcommand("info", "summarize a domain file");
    i->add_option("domain", domain_path, "domain JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (b->parsed()) return cmd_build(spec_path, out_path, precision_bits);
        if (v->parsed()) {
            std::optional<int> samples_opt;
            std::optional<std::uint64_t> seed_opt;
            std::optional<double> tol_opt;
            if (v->count("--samples")) samples_opt = samples;
            if (v->count("--seed")) seed_opt = seed;
            if (v->count("--tolerance")) tol_opt = tolerance;
            return cmd_verify(domain_path, out_path, samples_opt, seed_opt, bound, tol_opt,
                              lambda_samples, threads);
        }
        if (tc->parsed()) return cmd_twister_construct(spec_path, out_path, margin, denom_bound);
        if (tv->parsed()) return cmd_twister_validate(tw_path);
        if (p->parsed()) {
            if (!real_slice && place == 0)
                throw SchemaError("plot needs --place or --real-slice");
            return cmd_plot(domain_path, out_path, place, real_slice);
        }
        if (i->parsed()) return cmd_info(domain_path);
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision failure: " << e.what() << "\n";
        return 3;
    } catch (const SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidFieldSpec& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
