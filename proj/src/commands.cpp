#include "trilie/commands.hpp"

#include <functional>

namespace trilie {

namespace {

template <std::size_t N>
Json args_json(const std::array<std::size_t, N>& idx)
{
    Json a = Json::array();
    for (std::size_t i : idx) a.push_back(i + 1);
    return a;
}

Json violations_json(const std::vector<FilippovViolation>& vs)
{
    Json out = Json::array();
    for (const auto& v : vs) out.push_back({{"args", args_json(v.indices)}, {"residual", sparse_json(to_sparse(v.residual))}});
    return out;
}

Json violations_json(const std::vector<CocycleViolation>& vs)
{
    Json out = Json::array();
    for (const auto& v : vs) out.push_back({{"args", args_json(v.indices)}, {"residual", sparse_json(to_sparse(v.residual))}});
    return out;
}

Json violations_json(const std::vector<TripleViolation>& vs)
{
    Json out = Json::array();
    for (const auto& v : vs) out.push_back({{"args", args_json(v.indices)}, {"residual", sparse_json(to_sparse(v.residual))}});
    return out;
}

Json violations_json(const std::vector<QuadrupleViolation>& vs)
{
    Json out = Json::array();
    for (const auto& v : vs) out.push_back({{"args", args_json(v.indices)}, {"residual", scalar_json(v.residual)}});
    return out;
}

Json violations_json(const std::vector<CompatibilityViolation>& vs)
{
    Json out = Json::array();
    for (const auto& v : vs) out.push_back({{"args", args_json(v.indices)}, {"residual", scalar_json(v.residual)}});
    return out;
}

template <class T>
Json basis_json(const std::vector<T>& items)
{
    Json out = Json::array();
    for (const auto& x : items) out.push_back(matrix_json(x.m));
    return out;
}

Json search_json(bool found, const Matrix* member, std::size_t attempts_used, bool proved, const Vector& witness)
{
    Json out;
    out["found"] = found;
    out["member"] = member ? matrix_json(*member) : Json(nullptr);
    out["attempts_used"] = attempts_used;
    out["nonexistence_proved"] = proved;
    out["witness"] = witness.empty() ? Json(nullptr) : vector_json(witness);
    return out;
}

Json search_json(const FormSearch& s)
{
    return search_json(s.found(), s.found() ? &s.form->m : nullptr, s.attempts_used, s.nonexistence_proved, s.witness);
}

Json search_json(const MapSearch& s)
{
    return search_json(s.found(), s.found() ? &s.map->m : nullptr, s.attempts_used, s.nonexistence_proved, s.witness);
}

// Empty spaces contain only the zero map, which is singular.
FormSearch search_forms(const std::vector<BilinearForm>& space, const CommandOptions& o)
{
    if (space.empty()) return FormSearch{std::nullopt, 0, true, {}};
    return find_nondegenerate_member(space, o.seed, o.attempts);
}

MapSearch search_maps(const std::vector<LinearMap>& space, const CommandOptions& o)
{
    if (space.empty()) return MapSearch{std::nullopt, 0, true, {}};
    return find_invertible_member(space, o.seed, o.attempts);
}

class Run {
public:
    Run(const AlgebraDocument& doc, const CommandOptions& opt) : doc_(doc), opt_(opt) {}

    const StructureConstants& sc() const { return doc_.algebra; }
    const CommandOptions& options() const { return opt_; }

    void check(const std::string& name, bool ok) { checks_[name] = ok; }
    Json& dims() { return dims_; }
    Json& results() { return results_; }
    Json& violations() { return violations_; }
    void construct(AlgebraDocument d) { constructed_ = std::move(d); }

    const BilinearForm& form(std::size_t pos, const std::string& fallback) const
    {
        const std::string name = pos < opt_.forms.size() ? opt_.forms[pos] : fallback;
        auto it = doc_.forms.find(name);
        if (it == doc_.forms.end()) throw InputError("missing form \"" + name + "\" (use --form NAME)");
        return it->second;
    }

    const LinearMap& map(std::size_t pos, const std::string& fallback) const
    {
        const std::string name = pos < opt_.maps.size() ? opt_.maps[pos] : fallback;
        auto it = doc_.maps.find(name);
        if (it == doc_.maps.end()) throw InputError("missing map \"" + name + "\" (use --map NAME)");
        return it->second;
    }

    const Cocycle& cocycle(const std::string& fallback) const
    {
        const std::string name = opt_.cocycle.value_or(fallback);
        auto it = doc_.cocycles.find(name);
        if (it == doc_.cocycles.end()) throw InputError("missing cocycle \"" + name + "\" (use --cocycle NAME)");
        return it->second;
    }

    std::vector<std::string> names(const ExtensionLayout& layout) const { return layout.names(doc_.basis_names); }

    Report finish(const std::string& command, const std::string& digest) const
    {
        bool pass = true;
        for (const auto& [k, v] : checks_.items()) pass = pass && v.get<bool>();
        Report r;
        r.body["command"] = command;
        r.body["input_digest"] = digest;
        Json o;
        o["forms"] = opt_.forms;
        o["maps"] = opt_.maps;
        o["cocycle"] = opt_.cocycle ? Json(*opt_.cocycle) : Json(nullptr);
        o["n"] = opt_.n ? Json(*opt_.n) : Json(nullptr);
        o["seed"] = opt_.seed;
        o["attempts"] = opt_.attempts;
        r.body["options"] = std::move(o);
        r.body["verdict"] = {{"pass", pass}, {"checks", checks_}};
        r.body["dimensions"] = dims_;
        r.body["results"] = results_;
        r.body["violations"] = violations_;
        r.body["constructed"] = constructed_ ? document_to_json(*constructed_) : Json(nullptr);
        r.exit_code = pass ? 0 : 1;
        return r;
    }

private:
    const AlgebraDocument& doc_;
    const CommandOptions& opt_;
    Json checks_ = Json::object();
    Json dims_ = Json::object();
    Json results_ = Json::object();
    Json violations_ = Json::object();
    std::optional<AlgebraDocument> constructed_;
};

void filippov_check(Run& run, const StructureConstants& sc, const std::string& name)
{
    const FilippovReport f = check_filippov(sc);
    run.check(name, f.pass);
    if (!f.pass) run.violations()[name] = violations_json(f.violations);
}

void metric_check(Run& run, const StructureConstants& sc, const BilinearForm& b, const std::string& name)
{
    const MetricReport m = is_metric(sc, b);
    run.check(name, m.metric());
    if (!m.metric())
        run.violations()[name] = {{"symmetric", m.symmetric},
                                  {"nondegenerate", m.nondegenerate},
                                  {"invariance", violations_json(m.violations)}};
}

void symplectic_check(Run& run, const StructureConstants& sc, const BilinearForm& w, const std::string& name)
{
    const SymplecticReport s = is_symplectic(sc, w);
    run.check(name, s.symplectic());
    if (!s.symplectic())
        run.violations()[name] = {{"skew", s.skew},
                                  {"nondegenerate", s.nondegenerate},
                                  {"compatibility", violations_json(s.violations)}};
}

void derivation_check(Run& run, const StructureConstants& sc, const LinearMap& d, const std::string& name)
{
    const DerivationReport r = is_derivation(sc, d);
    run.check(name, r.pass);
    if (!r.pass) run.violations()[name] = violations_json(r.violations);
}

void cmd_check_filippov(Run& run)
{
    const FilippovReport f = check_filippov(run.sc());
    run.check("filippov", f.pass);
    run.results()["violation_count"] = f.violation_count;
    run.violations()["filippov"] = violations_json(f.violations);
}

void cmd_check_metric(Run& run)
{
    const MetricReport m = is_metric(run.sc(), run.form(0, "B"));
    run.check("symmetric", m.symmetric);
    run.check("nondegenerate", m.nondegenerate);
    run.check("invariant", m.invariant);
    run.results()["violation_count"] = m.violation_count;
    run.violations()["invariance"] = violations_json(m.violations);
}

void cmd_check_symplectic(Run& run)
{
    const BilinearForm& w = run.form(0, "omega");
    const SymplecticReport s = is_symplectic(run.sc(), w);
    run.check("skew", s.skew);
    run.check("nondegenerate", s.nondegenerate);
    run.check("compatible", s.compatible);
    run.results()["symplectic"] = s.symplectic();
    run.results()["violation_count"] = s.violation_count;
    run.violations()["compatibility"] = violations_json(s.violations);
    if (!run.options().maps.empty()) {
        const LinearMap& d = run.map(0, "D");
        derivation_check(run, run.sc(), d, "map_is_derivation");
        run.check("map_skew_for_form", check_skew_for_form(w, d));
    }
}

void cmd_solve_forms(Run& run)
{
    const std::size_t n = run.sc().dim();
    const auto sym = invariant_symmetric_forms(run.sc());
    const auto skew = symplectic_compatible_forms(run.sc());
    run.dims()["invariant_symmetric"] = sym.size();
    run.dims()["symplectic_compatible"] = skew.size();

    std::vector<SparseVector> rows;
    for (const auto& f : sym)
        for (std::size_t r = 0; r < n; ++r) rows.push_back(to_sparse(f.m.row(r)));
    const Subspace radical = Subspace::span(n, kernel(n, rows));
    run.dims()["common_radical"] = radical.dim();

    const FormSearch ms = search_forms(sym, run.options());
    const FormSearch ss = search_forms(skew, run.options());
    run.results()["invariant_symmetric_basis"] = basis_json(sym);
    run.results()["symplectic_compatible_basis"] = basis_json(skew);
    run.results()["common_radical"] = subspace_json(radical);
    run.results()["metric_search"] = search_json(ms);
    run.results()["symplectic_search"] = search_json(ss);
    run.check("metric_search_conclusive", ms.found() || ms.nonexistence_proved);
    run.check("symplectic_search_conclusive", ss.found() || ss.nonexistence_proved);
}

void report_map_space(Run& run, const std::vector<LinearMap>& space)
{
    run.dims()["space"] = space.size();
    const MapSearch s = search_maps(space, run.options());
    run.results()["basis"] = basis_json(space);
    run.results()["invertible_search"] = search_json(s);
    run.check("invertible_search_conclusive", s.found() || s.nonexistence_proved);
}

void cmd_solve_derivations(Run& run) { report_map_space(run, derivation_space(run.sc())); }

void cmd_solve_metric_derivations(Run& run) { report_map_space(run, metric_derivation_space(run.sc(), run.form(0, "B"))); }

void correspondence_from_map(Run& run, const BilinearForm& b, const LinearMap& d)
{
    const OmegaFromDerivation fwd = omega_from_derivation(run.sc(), b, d);
    const DerivationFromOmega back = derivation_from_omega(run.sc(), b, fwd.omega);
    run.check("d_invertible", d.invertible());
    symplectic_check(run, run.sc(), fwd.omega, "omega_symplectic");
    run.check("round_trip_derivation", back.d == d);
    run.check("round_trip_form", back.in_metric_derivations &&
                                     omega_from_derivation(run.sc(), b, back.d).omega == fwd.omega);
    run.results()["d"] = matrix_json(d.m);
    run.results()["omega"] = matrix_json(fwd.omega.m);
}

void cmd_correspondence(Run& run)
{
    const BilinearForm& b = run.form(0, "B");
    if (run.options().forms.size() > 1) {
        const BilinearForm& w = run.form(1, "omega");
        const DerivationFromOmega back = derivation_from_omega(run.sc(), b, w);
        symplectic_check(run, run.sc(), w, "omega_symplectic");
        run.check("d_in_metric_derivations", back.in_metric_derivations);
        run.check("d_invertible", back.invertible);
        run.check("round_trip_form", back.round_trip);
        run.check("round_trip_derivation", back.in_metric_derivations &&
                                               derivation_from_omega(run.sc(), b,
                                                                     omega_from_derivation(run.sc(), b, back.d).omega)
                                                       .d == back.d);
        run.results()["d"] = matrix_json(back.d.m);
        run.results()["omega"] = matrix_json(w.m);
        run.results()["source"] = "form";
        return;
    }
    if (!run.options().maps.empty()) {
        correspondence_from_map(run, b, run.map(0, "D"));
        run.results()["source"] = "map";
        return;
    }
    const auto space = metric_derivation_space(run.sc(), b);
    const MapSearch s = search_maps(space, run.options());
    run.dims()["metric_derivations"] = space.size();
    run.results()["invertible_search"] = search_json(s);
    run.check("invertible_member_found", s.found());
    if (s.found()) correspondence_from_map(run, b, *s.map);
    run.results()["source"] = "search";
}

void cmd_construct_ln(Run& run)
{
    if (!run.options().n) throw InputError("construct-Ln requires --n");
    const TruncatedCurrent t = truncated_current_algebra(run.sc(), *run.options().n);
    run.dims()["input"] = run.sc().dim();
    run.dims()["output"] = t.algebra.dim();
    filippov_check(run, t.algebra, "filippov");
    run.check("nilpotent", is_nilpotent(t.algebra));
    derivation_check(run, t.algebra, t.grading, "grading_derivation");
    run.check("grading_invertible", t.grading.invertible());
    AlgebraDocument out;
    out.algebra = t.algebra;
    out.basis_names = run.names(t.layout);
    out.maps.emplace("D", t.grading);
    run.construct(std::move(out));
}

void report_dual_block(Run& run, const DualExtension& ext)
{
    const Subspace dual = ext.layout.block_span(Block::dual);
    const IsotropyClass c = classify_isotropy(ext.metric, dual);
    run.check("dual_ideal", is_ideal(ext.algebra, dual));
    run.check("dual_completely_isotropic", c.completely_isotropic);
    run.results()["dual_isotropy"] = c.label();
}

void cmd_construct_coadjoint(Run& run)
{
    std::optional<LinearMap> d;
    if (!run.options().maps.empty()) d = run.map(0, "D");
    const CoadjointSum co = coadjoint_semidirect(run.sc(), d);
    run.dims()["input"] = run.sc().dim();
    run.dims()["output"] = co.algebra.dim();
    filippov_check(run, co.algebra, "filippov");
    metric_check(run, co.algebra, co.metric, "metric");
    report_dual_block(run, co);
    AlgebraDocument out;
    out.algebra = co.algebra;
    out.basis_names = run.names(co.layout);
    out.forms.emplace("B", co.metric);
    if (co.d_tilde) {
        derivation_check(run, co.algebra, *co.d_tilde, "d_tilde_derivation");
        run.check("d_tilde_skew", check_skew_for_form(co.metric, *co.d_tilde));
        run.check("d_tilde_invertible", co.d_tilde->invertible());
        symplectic_check(run, co.algebra, *co.omega, "omega_symplectic");
        run.check("round_trip", derivation_from_omega(co.algebra, co.metric, *co.omega).d == *co.d_tilde);
        out.forms.emplace("omega", *co.omega);
        out.maps.emplace("D", *co.d_tilde);
    }
    run.construct(std::move(out));
}

void cocycle_checks(Run& run, const CocycleReport& r)
{
    run.check("cocycle", r.cocycle);
    run.check("alternating", r.alternating);
    run.results()["three_term_identity"] = r.bracket_terms;
    if (!r.cocycle) run.violations()["cocycle"] = violations_json(r.violations);
    if (!r.alternating) run.violations()["alternating"] = violations_json(r.alternating_violations);
}

void cmd_construct_ttheta(Run& run)
{
    const Cocycle& th = run.cocycle("theta");
    const CocycleReport r = validate_cocycle(run.sc(), th);
    cocycle_checks(run, r);
    if (!r.cocycle) return;
    const TThetaExtension ext = t_theta_extension(run.sc(), th);
    run.dims()["input"] = run.sc().dim();
    run.dims()["output"] = ext.algebra.dim();
    filippov_check(run, ext.algebra, "filippov");
    metric_check(run, ext.algebra, ext.metric, "metric");
    report_dual_block(run, ext);
    AlgebraDocument out;
    out.algebra = ext.algebra;
    out.basis_names = run.names(ext.layout);
    out.forms.emplace("B", ext.metric);
    run.construct(std::move(out));
}

void cmd_lift_derivation(Run& run)
{
    const Cocycle& th = run.cocycle("theta");
    const LinearMap& d = run.map(0, "D");
    const CompatibilityPair pair(run.form(0, "psi"));
    LiftedDerivation lift;
    try {
        lift = lift_derivation_t_theta(run.sc(), th, d, pair);
    } catch (const CompatibilityError& e) {
        run.check("compatible", false);
        run.results()["psi_sign_convention"] = nullptr;
        run.violations()["compatibility"] = violations_json(e.violations());
        return;
    }
    run.check("compatible", lift.compatible);
    run.results()["psi_sign_convention"] = to_string(lift.sign);
    run.check("d_bar_derivation", lift.derivation.pass);
    if (!lift.derivation.pass) run.violations()["d_bar_derivation"] = violations_json(lift.derivation.violations);
    run.check("d_bar_invertible", lift.invertible);
    run.check("d_bar_skew", lift.skew);
    run.check("omega_symplectic", lift.symplectic.symplectic());

    const TThetaExtension ext = t_theta_extension(run.sc(), th);
    run.dims()["output"] = ext.algebra.dim();
    AlgebraDocument out;
    out.algebra = ext.algebra;
    out.basis_names = run.names(ext.layout);
    out.forms.emplace("B", ext.metric);
    out.forms.emplace("omega", lift.omega);
    out.maps.emplace("D", lift.d_bar);
    run.construct(std::move(out));
}

void cmd_construct_double_extension(Run& run)
{
    const DoubleExtension ext = double_extension(run.sc(), run.form(0, "B"), run.map(0, "delta"));
    run.dims()["input"] = run.sc().dim();
    run.dims()["output"] = ext.algebra.dim();
    filippov_check(run, ext.algebra, "filippov");
    metric_check(run, ext.algebra, ext.metric, "metric");
    AlgebraDocument out;
    out.algebra = ext.algebra;
    out.basis_names = run.names(ext.layout);
    out.forms.emplace("B", ext.metric);
    run.construct(std::move(out));
}

void cmd_construct_symplectic_double_extension(Run& run)
{
    const SymplecticDoubleExtension ext =
        symplectic_double_extension(run.sc(), run.form(0, "B"), run.map(0, "D"), run.map(1, "delta"));
    run.dims()["input"] = run.sc().dim();
    run.dims()["output"] = ext.algebra.dim();
    filippov_check(run, ext.algebra, "filippov");
    metric_check(run, ext.algebra, ext.metric, "metric");
    run.check("d_tilde_invertible", ext.d_tilde_invertible);
    run.check("d_tilde_derivation", ext.d_tilde_derivation.pass);
    run.check("d_tilde_skew", ext.d_tilde_skew);
    symplectic_check(run, ext.algebra, ext.omega_tilde, "omega_symplectic");
    run.check("round_trip", ext.round_trip);
    AlgebraDocument out;
    out.algebra = ext.algebra;
    out.basis_names = run.names(ext.layout);
    out.forms.emplace("B", ext.metric);
    out.forms.emplace("omega", ext.omega_tilde);
    out.maps.emplace("D", ext.d_tilde);
    run.construct(std::move(out));
}

void cmd_isotropic_seed(Run& run)
{
    const BilinearForm& b = run.form(0, "B");
    const IsotropicSeed s = isotropic_seed(run.sc(), b);
    const bool nilpotent = is_nilpotent(run.sc());
    run.check("is_ideal", s.is_ideal);
    run.check("isotropic", s.isotropic);
    if (nilpotent && !s.abelian_case) run.check("nonzero", !s.ideal.is_zero());
    run.results()["nilpotent"] = nilpotent;
    run.results()["abelian_case"] = s.abelian_case;
    run.results()["seed"] = subspace_json(s.ideal);
    run.dims()["seed"] = s.ideal.dim();

    const GreedyIsotropic g = extend_isotropic_greedy(run.sc(), b, s.ideal);
    run.results()["greedy"] = {{"ideal", subspace_json(g.ideal)}, {"reached_bound", g.reached_bound}};
    run.dims()["greedy"] = g.ideal.dim();
    run.dims()["bound"] = g.bound;
}

void cmd_solve_delta(Run& run)
{
    const BilinearForm& b = run.form(0, "B");
    const LinearMap& d = run.map(0, "D");
    const auto deltas = solve_compatible_delta(run.sc(), b, d);
    run.dims()["space"] = deltas.size();
    run.results()["basis"] = basis_json(deltas);
    if (!d.invertible()) {
        run.results()["admissibility"] = "not checked: D is singular";
        return;
    }
    std::vector<LinearMap> trial{LinearMap(Matrix(d.dim(), d.dim()))};
    trial.insert(trial.end(), deltas.begin(), deltas.end());
    bool all = true;
    for (const auto& delta : trial) {
        const SymplecticDoubleExtension ext = symplectic_double_extension(run.sc(), b, d, delta);
        all = all && ext.pass() && check_filippov(ext.algebra).pass && is_metric(ext.algebra, ext.metric).metric();
    }
    run.check("all_admissible", all);
}

using Handler = std::function<void(Run&)>;

const std::vector<std::pair<std::string, Handler>>& handlers()
{
    static const std::vector<std::pair<std::string, Handler>> table{
        {"check-filippov", cmd_check_filippov},
        {"check-metric", cmd_check_metric},
        {"check-symplectic", cmd_check_symplectic},
        {"solve-forms", cmd_solve_forms},
        {"solve-derivations", cmd_solve_derivations},
        {"solve-metric-derivations", cmd_solve_metric_derivations},
        {"theorem-3-1", cmd_correspondence},
        {"construct-Ln", cmd_construct_ln},
        {"construct-coadjoint", cmd_construct_coadjoint},
        {"construct-ttheta", cmd_construct_ttheta},
        {"lift-derivation", cmd_lift_derivation},
        {"construct-double-extension", cmd_construct_double_extension},
        {"construct-symplectic-double-extension", cmd_construct_symplectic_double_extension},
        {"isotropic-seed", cmd_isotropic_seed},
        {"solve-delta", cmd_solve_delta},
    };
    return table;
}

Report error_report(const std::string& command, const std::string& digest, const std::string& kind,
                    const std::string& message, Json extra = Json::object())
{
    Report r;
    r.body["command"] = command;
    r.body["input_digest"] = digest;
    Json e;
    e["kind"] = kind;
    e["message"] = message;
    for (auto& [k, v] : extra.items()) e[k] = v;
    r.body["error"] = std::move(e);
    r.exit_code = 2;
    return r;
}

}  // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, h] : handlers()) out.push_back(name);
        return out;
    }();
    return names;
}

Report run_command(const std::string& command, const AlgebraDocument& doc, const CommandOptions& options,
                   const std::string& digest)
{
    for (const auto& [name, handler] : handlers()) {
        if (name != command) continue;
        Run run(doc, options);
        handler(run);
        return run.finish(command, digest);
    }
    throw InputError("unknown command \"" + command + "\"");
}

Report execute(const std::string& command, std::string_view input, const CommandOptions& options)
{
    const std::string digest = input_digest(input);
    try {
        return run_command(command, parse_document(input), options, digest);
    } catch (const ParseError& e) {
        return error_report(command, digest, "parse", e.what(), {{"location", e.location()}});
    } catch (const CommutationError& e) {
        return error_report(command, digest, "input", e.what(), {{"residual", matrix_json(e.residual())}});
    } catch (const InputError& e) {
        return error_report(command, digest, "input", e.what());
    }
}

}  // namespace trilie
