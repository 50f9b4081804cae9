#include "sfd/io.hpp"

#include <fstream>
#include <sstream>

#include "sfd/errors.hpp"

namespace sfd {

using nlohmann::json;

namespace {

QVec parse_rational_vector(const json& j) {
    if (!j.is_array()) throw SchemaError("expected an array of rational strings");
    QVec v;
    for (const auto& e : j) {
        if (e.is_string())
            v.push_back(parse_rational(e.get<std::string>()));
        else if (e.is_number_integer())
            v.push_back(mpq_class(e.get<long>()));
        else
            throw SchemaError("rationals must be strings like \"p/q\" or integers");
    }
    return v;
}

json rational_vector_to_json(const QVec& v) {
    json a = json::array();
    for (const auto& q : v) a.push_back(rational_str(q));
    return a;
}

std::string interval_decimal(const Interval& iv, int digits = 40) {
    Real m = iv.mid(256);
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, m.get());
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

void require_schema(const json& j, const char* want) {
    if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
        throw SchemaError("missing schema field");
    std::string got = j["schema"].get<std::string>();
    if (got != want)
        throw SchemaError("schema mismatch: expected " + std::string(want) + ", got " + got);
}

} // namespace

FieldSpec parse_field_spec(const json& j) {
    require_schema(j, kSpecSchema);
    FieldSpec s;
    if (!j.contains("min_poly") || !j["min_poly"].is_array())
        throw SchemaError("spec needs min_poly (ascending integer coefficients)");
    for (const auto& c : j["min_poly"]) {
        if (c.is_number_integer())
            s.min_poly.emplace_back(c.get<long>());
        else if (c.is_string())
            s.min_poly.emplace_back(mpz_class(c.get<std::string>()));
        else
            throw SchemaError("min_poly entries must be integers");
    }
    if (!j.contains("units") || !j["units"].is_array())
        throw SchemaError("spec needs units (arrays of rational strings)");
    for (const auto& u : j["units"]) s.units.push_back(parse_rational_vector(u));
    if (j.contains("N")) {
        if (!j["N"].is_array()) throw SchemaError("N must be an array of integers");
        for (const auto& n : j["N"]) s.N.push_back(n.get<long long>());
    }
    if (j.contains("precision_bits")) s.precision_bits = j["precision_bits"].get<long>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("sample_count")) s.sample_count = j["sample_count"].get<int>();
    if (j.contains("tolerance")) s.tolerance = j["tolerance"].get<double>();
    if (j.contains("twister") && !j["twister"].is_null()) {
        const json& tw = j["twister"];
        if (!tw.contains("entries") || !tw["entries"].is_array())
            throw SchemaError("explicit twister needs an entries array");
        std::vector<std::pair<std::vector<long long>, QVec>> entries;
        for (const auto& e : tw["entries"]) {
            std::vector<long long> cls;
            for (const auto& c : e.at("class")) cls.push_back(c.get<long long>());
            entries.emplace_back(std::move(cls), parse_rational_vector(e.at("coords")));
        }
        s.twister = std::move(entries);
    }
    return s;
}

SignedDomain build_from_spec(const FieldSpec& spec) {
    auto field = std::make_shared<NumberField>(spec.min_poly, spec.precision_bits);
    if (field->r1() < 1) throw InvalidFieldSpec("field must have a real place");
    if ((int)spec.units.size() != field->unit_rank())
        throw InvalidFieldSpec("spec must supply exactly r1 + r2 - 1 units");
    if ((int)spec.N.size() != field->r2())
        throw InvalidFieldSpec("spec must supply exactly r2 sector counts");
    std::vector<FieldElement> units;
    for (const auto& u : spec.units) units.push_back(field->element(u));
    Twister tw;
    if (spec.twister.has_value()) {
        tw = Twister(field, spec.N);
        for (const auto& [cls, coords] : *spec.twister) tw.set_entry(cls, field->element(coords));
        if (!tw.complete()) throw SchemaError("explicit twister table is incomplete");
    } else {
        tw = construct_twister(field, spec.N);
    }
    SignedDomain dom = build_signed_domain(field, std::move(units), spec.N, std::move(tw));
    dom.default_seed = spec.seed;
    dom.default_samples = spec.sample_count;
    dom.default_tolerance = spec.tolerance;
    return dom;
}

json twister_to_json(const Twister& tw) {
    json out;
    json entries = json::array();
    for (const auto& [cls, beta] : tw.table()) {
        json e;
        e["class"] = cls;
        e["coords"] = rational_vector_to_json(beta.coords);
        entries.push_back(std::move(e));
    }
    out["N"] = tw.sector_counts();
    out["entries"] = std::move(entries);
    return out;
}

Twister twister_from_json(const json& j, std::shared_ptr<const NumberField> field,
                          const std::vector<long long>& N) {
    Twister tw(field, N);
    if (!j.contains("entries") || !j["entries"].is_array())
        throw SchemaError("twister needs an entries array");
    for (const auto& e : j["entries"]) {
        std::vector<long long> cls;
        for (const auto& c : e.at("class")) cls.push_back(c.get<long long>());
        tw.set_entry(cls, field->element(parse_rational_vector(e.at("coords"))));
    }
    return tw;
}

json domain_to_json(const SignedDomain& dom) {
    const NumberField& k = *dom.field;
    json out;
    out["schema"] = kDomainSchema;
    json f;
    json mp = json::array();
    for (const auto& c : k.min_poly()) mp.push_back((long)c.get_si());
    f["min_poly"] = std::move(mp);
    f["r1"] = k.r1();
    f["r2"] = k.r2();
    f["degree"] = k.degree();
    f["precision_bits"] = k.precision_bits();
    out["field"] = std::move(f);

    json units = json::array();
    for (const auto& u : dom.units) units.push_back(rational_vector_to_json(u.coords));
    out["units"] = std::move(units);
    out["N"] = dom.N;
    {
        json lat = json::array();
        const int r = k.unit_rank();
        for (int i = 0; i < r; ++i) lat.push_back(1);
        for (auto n : dom.N) lat.push_back(n);
        out["lattice"] = std::move(lat);
    }
    out["det_R_sign"] = dom.det_R_sign;
    out["basis_embedding_sign"] = dom.basis_embedding_sign;
    out["degree_constant"] = dom.degree_constant;
    out["twister"] = twister_to_json(dom.twister);

    json cones = json::array();
    for (const auto& c : dom.cones) {
        json jc;
        jc["alpha"] = c.alpha;
        jc["mu"] = c.mu;
        json verts = json::array();
        for (const auto& v : c.simplex.vertices) verts.push_back(v);
        jc["vertices"] = std::move(verts);
        json gens = json::array();
        json embs = json::array();
        for (const auto& g : c.generators) {
            gens.push_back(rational_vector_to_json(g.coords));
            json row = json::array();
            for (const auto& iv : k.iota_row(g, 128)) row.push_back(interval_decimal(iv));
            embs.push_back(std::move(row));
        }
        jc["generators"] = std::move(gens);
        jc["embeddings"] = std::move(embs);
        jc["y_signs"] = c.y_signs;
        json closure = json::array();
        for (bool b : c.closure) closure.push_back(b);
        jc["closure"] = std::move(closure);
        json sect = json::array();
        for (size_t j2 = 0; j2 < c.sector.size(); ++j2) {
            json se;
            se["offset"] = c.sector[j2].offset;
            se["v"] = c.sector[j2].v;
            Interval alpha =
                omega_j(k, dom.units,
                        dom.N, (int)j2,
                        [&] {
                            QVec vq(c.sector[j2].v.size());
                            for (size_t i = 0; i < vq.size(); ++i)
                                vq[i] = mpq_class((long)c.sector[j2].v[i]);
                            return vq;
                        }(),
                        128) +
                Interval::from_long((long)c.sector[j2].offset, 128);
            se["alpha_j"] = alpha.mid_double();
            sect.push_back(std::move(se));
        }
        jc["sector"] = std::move(sect);
        cones.push_back(std::move(jc));
    }
    out["cones"] = std::move(cones);
    out["build"] = json{{"precision_bits", dom.precision_bits},
                        {"seed", dom.default_seed},
                        {"sample_count", dom.default_samples},
                        {"tolerance", dom.default_tolerance},
                        {"tool", "sfd"}};
    return out;
}

SignedDomain domain_from_json(const json& j) {
    require_schema(j, kDomainSchema);
    const json& f = j.at("field");
    ZPoly mp;
    for (const auto& c : f.at("min_poly")) mp.emplace_back(c.get<long>());
    long prec = f.value("precision_bits", 128L);
    auto field = std::make_shared<NumberField>(mp, prec);
    if (field->r1() != f.at("r1").get<int>() || field->r2() != f.at("r2").get<int>())
        throw SchemaError("stored signature does not match the minimal polynomial");

    SignedDomain dom;
    dom.field = field;
    dom.precision_bits = prec;
    for (const auto& u : j.at("units")) dom.units.push_back(field->element(parse_rational_vector(u)));
    for (const auto& n : j.at("N")) dom.N.push_back(n.get<long long>());
    dom.det_R_sign = j.at("det_R_sign").get<int>();
    dom.basis_embedding_sign = j.at("basis_embedding_sign").get<int>();
    dom.degree_constant = j.at("degree_constant").get<int>();
    dom.twister = twister_from_json(j.at("twister"), field, dom.N);

    for (const auto& jc : j.at("cones")) {
        SignedCone c;
        c.alpha = jc.at("alpha").get<std::size_t>();
        c.mu = jc.at("mu").get<int>();
        for (const auto& v : jc.at("vertices")) {
            IVec vv;
            for (const auto& x : v) vv.push_back(x.get<std::int64_t>());
            c.simplex.vertices.push_back(std::move(vv));
        }
        for (const auto& g : jc.at("generators"))
            c.generators.push_back(field->element(parse_rational_vector(g)));
        if (jc.contains("y_signs"))
            for (const auto& s : jc.at("y_signs")) c.y_signs.push_back(s.get<int>());
        if (jc.contains("closure"))
            for (const auto& b : jc.at("closure")) c.closure.push_back(b.get<bool>());
        if (jc.contains("sector"))
            for (const auto& se : jc.at("sector")) {
                SectorEntry e;
                e.offset = se.at("offset").get<long long>();
                for (const auto& x : se.at("v")) e.v.push_back(x.get<std::int64_t>());
                c.sector.push_back(std::move(e));
            }
        // structural validation so later exact algebra never indexes out of
        // bounds on hand-edited files
        const int n = field->degree();
        if ((int)c.simplex.vertices.size() != n)
            throw SchemaError("cone " + std::to_string(c.alpha) + ": expected " +
                              std::to_string(n) + " vertices");
        for (const auto& v : c.simplex.vertices)
            if ((int)v.size() != n - 1)
                throw SchemaError("cone " + std::to_string(c.alpha) + ": bad vertex length");
        if ((int)c.generators.size() != n)
            throw SchemaError("cone " + std::to_string(c.alpha) + ": expected " +
                              std::to_string(n) + " generators");
        if (c.mu != 0 && (int)c.y_signs.size() != n)
            throw SchemaError("cone " + std::to_string(c.alpha) + ": y_signs missing");
        if ((int)c.sector.size() != field->r2())
            throw SchemaError("cone " + std::to_string(c.alpha) + ": sector data missing");
        dom.cones.push_back(std::move(c));
    }
    if (j.contains("build")) {
        const json& b = j["build"];
        if (b.contains("seed")) dom.default_seed = b["seed"].get<std::uint64_t>();
        if (b.contains("sample_count")) dom.default_samples = b["sample_count"].get<int>();
        if (b.contains("tolerance")) dom.default_tolerance = b["tolerance"].get<double>();
    }
    return dom;
}

json report_to_json(const VerifyReport& rep) {
    json out;
    out["schema"] = kReportSchema;
    out["samples_requested"] = rep.samples_requested;
    out["accepted"] = rep.accepted;
    out["resampled"] = rep.resampled;
    out["counts_all_one"] = rep.counts_all_one;
    out["stability_pass"] = rep.stability_pass;
    out["lambda_pass"] = rep.lambda_pass;
    out["sectors_pass"] = rep.sectors_pass;
    out["y_nonzero_pass"] = rep.y_nonzero_pass;
    out["mu_relabeling_pass"] = rep.mu_relabeling_pass;
    out["det_coherence_pass"] = rep.det_coherence_pass;
    out["e_invariance_pass"] = rep.e_invariance_pass;
    out["mu_zero_cones"] = rep.mu_zero_cones;
    out["bound_used_max"] = rep.bound_used_max;
    out["per_sample_counts"] = rep.per_sample_counts;
    out["per_cone_hits"] = rep.per_cone_hits;
    out["max_orbit_per_cone"] = rep.max_orbit_per_cone;
    out["seed"] = rep.seed;
    out["precision_bits"] = rep.precision_bits;
    out["failures"] = rep.failures;
    json lam;
    lam["simplicial"] = rep.lambda.simplicial;
    lam["orders_compatible"] = rep.lambda.orders_compatible;
    lam["orders_lambda_invariant"] = rep.lambda.orders_lambda_invariant;
    lam["volume_identity"] = rep.lambda.volume_identity;
    lam["covering"] = rep.lambda.covering;
    lam["interior_disjoint"] = rep.lambda.interior_disjoint;
    lam["spanning_equivariant"] = rep.lambda.spanning_equivariant;
    lam["omega_range"] = rep.lambda.omega_range;
    lam["sector_bounds"] = rep.lambda.sector_bounds;
    lam["volume_sum"] = rep.lambda.volume_sum.get_str();
    lam["volume_expected"] = rep.lambda.volume_expected.get_str();
    lam["samples_used"] = rep.lambda.samples_used;
    lam["boundary_pairs_checked"] = rep.lambda.boundary_pairs_checked;
    out["lambda"] = std::move(lam);
    out["all_pass"] = rep.all_pass();
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SchemaError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << text;
}

} // namespace sfd
