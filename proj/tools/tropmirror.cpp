#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tropmirror/errors.hpp"
#include "tropmirror/io.hpp"
#include "tropmirror/mirror.hpp"
#include "tropmirror/patchwork.hpp"

using namespace tropmirror;

namespace {

constexpr const char* kBasisChoices =
    "cosheaf values in Hermite normal form bases of their strata; volume form on the dual lattice in the standard "
    "orientation; contraction at the lexicographically smallest vertex of tau";

struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::string divisor_path;
    std::string signs_path;
    std::string write_path;
    std::string dump_prefix;
    std::optional<Ring> ring;
    bool text = false;
    std::uint64_t seed = 0;
    bool raw = false;
    int jobs = 1;
    int samples = 0;
    bool check_mirror = false;
};

struct Outcome {
    Json report;
    int exit_code = 0;
};

struct LoadedPair {
    DualPair pair;
    Json inputs = Json::array();
};

Json input_entry(const LoadedJson& f) { return Json{{"path", f.path}, {"fnv1a", f.hash}}; }

CentralTriangulation side_from(const Json& j) {
    if (is_triangulation_json(j)) return triangulation_from_json(j);
    return generate_central(polytope_from_json(j));
}

// One file: the other side is generated from the dual polytope. Polytope files are triangulated on the fly.
LoadedPair load_pair(const RunConfig& cfg) {
    require(cfg.inputs.size() == 1 || cfg.inputs.size() == 2, ErrorCode::InvalidInput,
            "expected one or two triangulation or polytope files");
    LoadedPair out;
    std::vector<LoadedJson> files;
    for (const std::string& path : cfg.inputs) {
        files.push_back(load_json_file(path));
        Json entry = input_entry(files.back());
        entry["generated_triangulation"] = !is_triangulation_json(files.back().value);
        out.inputs.push_back(entry);
    }
    CentralTriangulation primal = side_from(files[0].value);
    CentralTriangulation dual = files.size() == 2 ? side_from(files[1].value) : generate_central(dual_polytope(primal.polytope()));
    out.pair = DualPair::make(std::move(primal), std::move(dual));
    return out;
}

Json base_report(const RunConfig& cfg) {
    Json r{{"command", cfg.command}, {"signature_seed", cfg.seed}, {"basis_choices", kBasisChoices}};
    if (cfg.ring) r["ring"] = ring_name(*cfg.ring);
    return r;
}

void write_file(const std::string& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    require(bool(out), ErrorCode::InvalidInput, "cannot write " + path);
    out << j.dump(2) << "\n";
}

CellPoset side_poset(const DualPair& pair, bool primal_side, PosetKind kind, std::uint64_t seed) {
    // the hypersurface of (Delta, T) is indexed by P(T°, T)
    TriangulationPtr tau = primal_side ? pair.dual : pair.primal;
    TriangulationPtr sigma = primal_side ? pair.primal : pair.dual;
    CellPoset P = kind == PosetKind::P ? CellPoset::build_P(tau, sigma) : CellPoset::build_J(tau, sigma);
    P.assign_signature(seed);
    return P;
}

void verify_complexes(const CellPoset& P) {
    for (int p = 0; p <= P.n(); ++p) Cosheaf(P, CosheafKind::F, p).chain_complex().verify(Ring::Z);
}

Json pair_summary(const DualPair& pair) {
    return Json{{"n", pair.n()},
                {"primal_points", pair.primal->points().size()},
                {"dual_points", pair.dual->points().size()},
                {"primal_boundary_simplices", pair.primal->boundary_simplices().size()},
                {"dual_boundary_simplices", pair.dual->boundary_simplices().size()}};
}

// ---------------------------------------------------------------------------------------------

Outcome cmd_dual(const RunConfig& cfg) {
    require(cfg.inputs.size() == 1, ErrorCode::InvalidInput, "dual takes one polytope file");
    LoadedJson f = load_json_file(cfg.inputs[0]);
    LatticePolytope P = polytope_from_json(f.value);
    require(is_reflexive(P), ErrorCode::NotReflexive, "the polytope is not reflexive");
    Json dual = polytope_to_json(dual_polytope(P));
    if (!cfg.write_path.empty()) write_file(cfg.write_path, dual);
    Outcome o{base_report(cfg)};
    o.report["inputs"] = Json::array({input_entry(f)});
    o.report["polytope"] = dual;
    return o;
}

Outcome cmd_triangulate(const RunConfig& cfg) {
    require(cfg.inputs.size() == 1, ErrorCode::InvalidInput, "triangulate takes one polytope file");
    LoadedJson f = load_json_file(cfg.inputs[0]);
    CentralTriangulation T = generate_central(polytope_from_json(f.value));
    Json tri = triangulation_to_json(T);
    if (!cfg.write_path.empty()) write_file(cfg.write_path, tri);
    Outcome o{base_report(cfg)};
    o.report["inputs"] = Json::array({input_entry(f)});
    o.report["triangulation"] = tri;
    o.report["method"] = "pulling triangulation of each facet, coned to the origin";
    o.report["convexity"] = "not checked";
    return o;
}

Outcome cmd_validate(const RunConfig& cfg) {
    require(cfg.inputs.size() == 1, ErrorCode::InvalidInput, "validate takes one triangulation file");
    LoadedJson f = load_json_file(cfg.inputs[0]);
    TriangulationInput in = triangulation_input_from_json(f.value);
    ValidationReport rep = validate_boundary(in.polytope, in.boundary);
    Outcome o{base_report(cfg)};
    o.report["inputs"] = Json::array({input_entry(f)});
    o.report["reflexive"] = is_reflexive(in.polytope);
    o.report["validation"] = validation_to_json(rep);
    o.report["convexity"] = "not checked";
    if (rep.valid()) {
        CentralTriangulation T = CentralTriangulation::from_boundary(in.polytope, in.boundary);
        std::vector<int> by_dim(T.rank() + 1, 0);
        for (const Simplex& s : T.simplices()) ++by_dim[CentralTriangulation::dim(s)];
        o.report["lattice_points"] = T.points().size();
        o.report["simplices_by_dim"] = by_dim;
    }
    o.exit_code = rep.valid() && is_reflexive(in.polytope) ? 0 : 1;
    return o;
}

Outcome cmd_hodge(const RunConfig& cfg) {
    LoadedPair lp = load_pair(cfg);
    const Ring ring = cfg.ring.value_or(Ring::Q);
    Outcome o{base_report(cfg)};
    o.report["ring"] = ring_name(ring);
    o.report["inputs"] = lp.inputs;
    o.report["pair"] = pair_summary(lp.pair);
    for (bool primal : {true, false}) {
        CellPoset P = side_poset(lp.pair, primal, PosetKind::P, cfg.seed);
        verify_complexes(P);
        const std::string side = primal ? "primal" : "dual";
        o.report["tables"][side] = hodge_table_to_json(hodge_table(P, ring));
        if (!cfg.dump_prefix.empty()) write_file(cfg.dump_prefix + "_" + side + ".json", poset_dump(P));
    }
    return o;
}

// Independence modulo boundaries of the transferred F2 homology basis.
bool transfer_injective_f2(const MirrorTransfer& t, int q, int& checked) {
    std::vector<IntVector> basis = t.source_complex().f2_homology_basis(q);
    const ChainComplex& tgt = t.target_complex();
    F2Reducer red(tgt.dim(q));
    if (q + 1 <= tgt.top_degree()) {
        const SparseMatrix& bd = tgt.boundary(q + 1);
        for (int c = 0; c < bd.cols(); ++c) {
            Bits col(tgt.dim(q));
            for (const auto& [row, v] : bd.column(c))
                if (v % 2 != 0) col.set(row, true);
            red.add(col);
        }
    }
    for (const IntVector& g : basis) {
        ++checked;
        if (!red.add(Bits::from_int(mod2(t.transfer(q, g, Ring::F2))))) return false;
    }
    return true;
}

Outcome cmd_mirror_check(const RunConfig& cfg) {
    LoadedPair lp = load_pair(cfg);
    const int n = lp.pair.n();
    std::vector<Ring> rings = cfg.ring ? std::vector<Ring>{*cfg.ring} : std::vector<Ring>{Ring::Q, Ring::F2, Ring::Z};
    Outcome o{base_report(cfg)};
    o.report["inputs"] = lp.inputs;
    o.report["pair"] = pair_summary(lp.pair);
    CellPoset primal = side_poset(lp.pair, true, PosetKind::P, cfg.seed);
    CellPoset dual = side_poset(lp.pair, false, PosetKind::P, cfg.seed);
    verify_complexes(primal);
    verify_complexes(dual);
    bool all_equal = true;
    Json per_ring = Json::array();
    for (Ring ring : rings) {
        HodgeTable a = hodge_table(primal, ring), b = hodge_table(dual, ring);
        bool equal = true;
        for (int p = 0; p <= n; ++p) equal = equal && a.rows[p] == b.rows[n - p];
        all_equal = all_equal && equal;
        per_ring.push_back(Json{{"ring", ring_name(ring)},
                                {"primal", hodge_table_to_json(a)},
                                {"dual", hodge_table_to_json(b)},
                                {"mirror_equal", equal}});
    }
    o.report["tables"] = per_ring;

    CellPoset src = side_poset(lp.pair, true, PosetKind::J, cfg.seed);
    CellPoset tgt = side_poset(lp.pair, false, PosetKind::J, cfg.seed);
    Json spots = Json::array();
    bool transfers_ok = true;
    for (int p = 0; p <= n; ++p) {
        MirrorTransfer t(src, tgt, p);
        for (int q = 0; q <= n; ++q) {
            int checked = 0;
            bool ok = transfer_injective_f2(t, q, checked);
            transfers_ok = transfers_ok && ok;
            spots.push_back(Json{{"p", p}, {"q", q}, {"classes", checked}, {"injective_f2", ok}});
        }
    }
    o.report["transfer_spot_checks"] = spots;
    o.report["mirror_equal"] = all_equal && transfers_ok;
    o.exit_code = all_equal && transfers_ok ? 0 : 2;
    return o;
}

Outcome cmd_divisor_class(const RunConfig& cfg) {
    require(!cfg.divisor_path.empty(), ErrorCode::InvalidInput, "divisor-class needs --divisor");
    LoadedPair lp = load_pair(cfg);
    LoadedJson df = load_json_file(cfg.divisor_path);
    const CentralTriangulation& T = *lp.pair.primal;
    DivisorF2 D = divisor_from_json(T, df.value);
    CellPoset P = CellPoset::build_P(lp.pair.primal, lp.pair.dual);
    P.assign_signature(cfg.seed);
    const int q = P.n() - 1;
    ChainComplex C = Cosheaf(P, CosheafKind::F, q).chain_complex();
    IntVector cycle = divisor_restriction(P, C, D);
    Outcome o{base_report(cfg)};
    o.report["ring"] = "F2";
    Json inputs = lp.inputs;
    inputs.push_back(input_entry(df));
    o.report["inputs"] = inputs;
    o.report["divisor"] = divisor_to_json(T, D);
    o.report["canonical_divisor"] = divisor_to_json(T, canonical_divisor(T, D));
    o.report["restriction_degree"] = q;
    o.report["restriction_cycle"] = cycle_dump(P, C, q, cycle);
    o.report["class_nonzero"] = !is_null_class(C, q, cycle, Ring::F2);
    return o;
}

Json betti_row(const PatchworkContext& ctx, const DivisorF2& D, const SignCosheaf& S, bool check_mirror, bool& agrees) {
    RealBetti rb = real_betti(S);
    ConnectednessReport v = ctx.verdict(D);
    Json row{{"divisor", divisor_to_json(*ctx.pair().primal, D)},
             {"class_nonzero", v.class_nonzero},
             {"b0", rb.b0_union_find},
             {"betti", rb.betti},
             {"verdict", verdict_name(v.verdict)}};
    agrees = rb.consistent();
    if (v.verdict != Verdict::HypothesisFails) agrees = agrees && (rb.b0_union_find == (v.class_nonzero ? 1 : 2));
    if (check_mirror) {
        bool m = ctx.delta1_is_mirror_of_restriction(D);
        row["delta1_mirrors_restriction"] = m;
        agrees = agrees && m;
    }
    row["agrees"] = agrees;
    return row;
}

Json hypothesis_json(const PatchworkContext& ctx) {
    Json dims = Json::object();
    for (const auto& [k, d] : ctx.hypothesis_dims()) dims[std::to_string(k)] = d;
    return Json{{"holds", ctx.hypothesis_holds()}, {"top_homology_dims_F2", dims}};
}

Outcome cmd_patchwork(const RunConfig& cfg) {
    require(cfg.divisor_path.empty() != cfg.signs_path.empty(), ErrorCode::InvalidInput,
            "patchwork needs exactly one of --signs and --divisor");
    LoadedPair lp = load_pair(cfg);
    const CentralTriangulation& T = *lp.pair.primal;
    LoadedJson f = load_json_file(cfg.signs_path.empty() ? cfg.divisor_path : cfg.signs_path);
    SignDistribution signs = cfg.signs_path.empty() ? signs_from_divisor(T, divisor_from_json(T, f.value))
                                                    : signs_from_json(T, f.value);
    DivisorF2 D = divisor_from_signs(T, signs);
    PatchworkContext ctx(lp.pair);
    SignCosheaf S = ctx.sign_cosheaf(signs);
    bool agrees = false;
    Json row = betti_row(ctx, D, S, cfg.check_mirror, agrees);
    Outcome o{base_report(cfg)};
    o.report["ring"] = "F2";
    Json inputs = lp.inputs;
    inputs.push_back(input_entry(f));
    o.report["inputs"] = inputs;
    o.report["signs"] = signs_to_json(T, signs);
    o.report["result"] = row;
    o.report["components"] = count_components(S);
    o.report["hypothesis"] = hypothesis_json(ctx);
    o.report["connectedness_convention"] = "connected iff the restriction class is nonzero";
    const Verdict v = ctx.verdict(D).verdict;
    o.exit_code = v == Verdict::HypothesisFails ? 3 : agrees ? 0 : 2;
    return o;
}

std::vector<DivisorF2> sampled_classes(const CentralTriangulation& T, int samples, std::uint64_t seed) {
    const int rays = T.ray_count();
    require(rays <= 63, ErrorCode::RankUnsupported, "too many rays to sample divisor classes");
    const int dim = divisor_class_dimension(T);
    const int wanted = dim < 31 ? int(std::min<std::int64_t>(samples, std::int64_t(1) << dim)) : samples;
    std::mt19937_64 rng(seed);
    std::set<std::uint64_t> seen;
    std::vector<DivisorF2> out;
    const std::uint64_t mask = rays == 64 ? ~0ull : (std::uint64_t(1) << rays) - 1;
    while (int(out.size()) < wanted) {
        DivisorF2 c = canonical_divisor(T, divisor_from_bits(T, rng() & mask));
        if (seen.insert(divisor_bits(c)).second) out.push_back(c);
    }
    return out;
}

template <class Fn>
void parallel_rows(int count, int jobs, Fn&& fn) {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

Outcome cmd_sweep(const RunConfig& cfg) {
    LoadedPair lp = load_pair(cfg);
    const CentralTriangulation& T = *lp.pair.primal;
    PatchworkContext ctx(lp.pair);
    Outcome o{base_report(cfg)};
    o.report["ring"] = "F2";
    o.report["inputs"] = lp.inputs;
    o.report["hypothesis"] = hypothesis_json(ctx);
    o.report["class_dimension"] = divisor_class_dimension(T);
    o.report["connectedness_convention"] = "connected iff the restriction class is nonzero";

    std::vector<Json> rows;
    std::vector<char> agree;
    if (cfg.raw) {
        const int points = int(T.points().size());
        require(points <= 20, ErrorCode::InvalidInput, "a raw sweep is limited to 20 lattice points");
        const int count = 1 << points;
        rows.resize(count);
        agree.resize(count);
        parallel_rows(count, cfg.jobs, [&](int i) {
            SignDistribution s;
            for (int k = 0; k < points; ++k) s.sign.push_back(std::uint8_t((i >> k) & 1));
            DivisorF2 D = divisor_from_signs(T, s);
            bool a = false;
            rows[i] = betti_row(ctx, D, ctx.sign_cosheaf(s), cfg.check_mirror, a);
            rows[i]["signs"] = signs_to_json(T, s)["signs"];
            rows[i]["class"] = divisor_bits(canonical_divisor(T, D));
            agree[i] = a;
        });
        // Betti vectors must be constant on divisor classes
        std::map<std::uint64_t, Json> by_class;
        bool constant = true;
        for (const Json& r : rows) {
            auto [it, fresh] = by_class.emplace(r["class"].get<std::uint64_t>(), r["betti"]);
            constant = constant && (fresh || it->second == r["betti"]);
        }
        o.report["mode"] = "raw sign distributions";
        o.report["classes_seen"] = by_class.size();
        o.report["betti_constant_on_classes"] = constant;
        if (!constant) o.exit_code = 2;
    } else {
        std::vector<DivisorF2> divisors;
        if (cfg.samples > 0) {
            divisors = sampled_classes(T, cfg.samples, cfg.seed);
            o.report["mode"] = "sampled divisor classes";
            o.report["sample_seed"] = cfg.seed;
        } else {
            require(divisor_class_dimension(T) <= 20, ErrorCode::InvalidInput,
                    "too many divisor classes to enumerate; pass --samples");
            divisors = divisor_classes(T);
            o.report["mode"] = "all divisor classes";
        }
        rows.resize(divisors.size());
        agree.resize(divisors.size());
        parallel_rows(int(divisors.size()), cfg.jobs, [&](int i) {
            bool a = false;
            rows[i] = betti_row(ctx, divisors[i], ctx.sign_cosheaf(divisors[i]), cfg.check_mirror, a);
            agree[i] = a;
        });
    }
    std::map<std::string, int> correlation;
    int agreeing = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ++correlation[rows[i]["verdict"].get<std::string>() + " / b0=" + std::to_string(rows[i]["b0"].get<int>())];
        agreeing += agree[i];
    }
    o.report["rows"] = rows;
    o.report["row_count"] = rows.size();
    o.report["agreeing_rows"] = agreeing;
    o.report["correlation"] = correlation;
    if (!ctx.hypothesis_holds()) o.exit_code = 3;
    else if (agreeing != int(rows.size())) o.exit_code = 2;
    return o;
}

// ---------------------------------------------------------------------------------------------

std::string scalar_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

bool is_flat(const Json& j) {
    if (!j.is_object()) return false;
    for (const auto& [k, v] : j.items())
        if (v.is_object() || (v.is_array() && !v.empty() && (v[0].is_object() || v[0].is_array()))) return false;
    return true;
}

void render(std::ostream& os, const Json& j, int indent);

void render_table(std::ostream& os, const Json& rows, int indent) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : rows[0].items()) keys.push_back(k);
    std::vector<std::size_t> width;
    for (const std::string& k : keys) width.push_back(k.size());
    for (const Json& r : rows)
        for (std::size_t c = 0; c < keys.size(); ++c)
            width[c] = std::max(width[c], r.contains(keys[c]) ? scalar_text(r[keys[c]]).size() : 0);
    auto line = [&](auto cell) {
        os << std::string(indent, ' ');
        for (std::size_t c = 0; c < keys.size(); ++c) {
            std::string s = cell(c);
            os << s << std::string(width[c] - s.size() + 2, ' ');
        }
        os << "\n";
    };
    line([&](std::size_t c) { return keys[c]; });
    for (const Json& r : rows) line([&](std::size_t c) { return r.contains(keys[c]) ? scalar_text(r[keys[c]]) : ""; });
}

void render(std::ostream& os, const Json& j, int indent) {
    const std::string pad(indent, ' ');
    for (const auto& [k, v] : j.items()) {
        if (v.is_object()) {
            os << pad << k << ":\n";
            render(os, v, indent + 2);
        } else if (v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), is_flat)) {
            os << pad << k << ":\n";
            render_table(os, v, indent + 2);
        } else if (v.is_array() && !v.empty() && v[0].is_object()) {
            os << pad << k << ":\n";
            for (const Json& item : v) {
                os << pad << "  -\n";
                render(os, item, indent + 4);
            }
        } else {
            os << pad << k << ": " << scalar_text(v) << "\n";
        }
    }
}

// Which rings each command accepts; an empty list means the ring flag is meaningless there.
const std::map<std::string, std::vector<Ring>>& ring_support() {
    static const std::map<std::string, std::vector<Ring>> table{
        {"dual", {}},
        {"triangulate", {}},
        {"validate", {}},
        {"hodge", {Ring::Z, Ring::Q, Ring::F2}},
        {"mirror-check", {Ring::Z, Ring::Q, Ring::F2}},
        {"divisor-class", {Ring::F2}},
        {"patchwork", {Ring::F2}},
        {"sweep", {Ring::F2}},
    };
    return table;
}

Outcome dispatch(const RunConfig& cfg) {
    if (cfg.ring) {
        const std::vector<Ring>& ok = ring_support().at(cfg.command);
        require(std::find(ok.begin(), ok.end(), *cfg.ring) != ok.end(), ErrorCode::InvalidInput,
                std::string("--ring ") + ring_name(*cfg.ring) + " is not supported by " + cfg.command);
    }
    require(cfg.jobs >= 1, ErrorCode::InvalidInput, "--jobs must be positive");
    require(cfg.samples >= 0, ErrorCode::InvalidInput, "--samples must be nonnegative");
    if (cfg.command == "dual") return cmd_dual(cfg);
    if (cfg.command == "triangulate") return cmd_triangulate(cfg);
    if (cfg.command == "validate") return cmd_validate(cfg);
    if (cfg.command == "hodge") return cmd_hodge(cfg);
    if (cfg.command == "mirror-check") return cmd_mirror_check(cfg);
    if (cfg.command == "divisor-class") return cmd_divisor_class(cfg);
    if (cfg.command == "patchwork") return cmd_patchwork(cfg);
    return cmd_sweep(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tropical homology, mirror transfers and patchworking for reflexive polytope pairs"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string ring_text, out_format = "json";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--ring", ring_text, "coefficient ring")->check(CLI::IsMember({"z", "q", "f2"}));
        sub->add_option("--out", out_format, "report format")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--seed", cfg.seed, "balanced signature seed and sampling seed");
        sub->add_option("--jobs", cfg.jobs, "worker threads for sweep rows");
    };
    struct CommandInfo {
        const char* name;
        const char* help;
        const char* inputs;
    };
    const CommandInfo commands[] = {
        {"dual", "dual polytope of a reflexive polytope", "polytope file"},
        {"triangulate", "central unimodular triangulation of a polytope of rank <= 3", "polytope file"},
        {"validate", "check a triangulation file", "triangulation file"},
        {"hodge", "tropical homology tables of both sides", "triangulation or polytope files (primal, optional dual)"},
        {"mirror-check", "mirror equality of the tables plus transfer checks", "triangulation or polytope files"},
        {"divisor-class", "restriction of an F2 toric divisor and its class", "triangulation or polytope files"},
        {"patchwork", "Betti numbers and connectedness of a patchworked hypersurface", "triangulation or polytope files"},
        {"sweep", "connectedness over divisor classes or raw sign distributions", "triangulation or polytope files"},
    };
    for (const CommandInfo& s : commands) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("inputs", cfg.inputs, s.inputs)->required();
        add_common(sub);
        const std::string name = s.name;
        if (name == "dual" || name == "triangulate") sub->add_option("--write", cfg.write_path, "also write the bare result file");
        if (name == "hodge") sub->add_option("--dump-posets", cfg.dump_prefix, "write P poset dumps to <prefix>_primal/_dual.json");
        if (name == "divisor-class" || name == "patchwork") sub->add_option("--divisor", cfg.divisor_path, "divisor file");
        if (name == "patchwork") sub->add_option("--signs", cfg.signs_path, "sign distribution file");
        if (name == "patchwork" || name == "sweep")
            sub->add_flag("--check-mirror", cfg.check_mirror, "also compare the mirror transfer of delta1 with D|X");
        if (name == "sweep") {
            sub->add_flag("--raw", cfg.raw, "sweep every sign distribution instead of divisor classes");
            sub->add_option("--samples", cfg.samples, "sample this many random divisor classes");
        }
        sub->callback([&cfg, name] { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (!ring_text.empty()) cfg.ring = parse_ring(ring_text);
    cfg.text = out_format == "text";

    try {
        Outcome o = dispatch(cfg);
        o.report["exit_code"] = o.exit_code;
        if (cfg.text)
            render(std::cout, o.report, 0);
        else
            std::cout << o.report.dump(2) << "\n";
        return o.exit_code;
    } catch (const TropError& e) {
        Json err{{"command", cfg.command}, {"error", error_name(e.code())}, {"message", e.what()}, {"exit_code", exit_code_for(e.code())}};
        std::cerr << (cfg.text ? std::string(e.what()) : err.dump(2)) << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
