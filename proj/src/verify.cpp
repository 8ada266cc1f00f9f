#include "relext/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "relext/exitspace.hpp"
#include "relext/random.hpp"
#include "relext/subspace.hpp"

namespace relext {

namespace ss = subspace;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Complex nonreal(Rng& rng) {
  const double y = rng.uniform(0.5, 3.0);
  return {rng.uniform(-3.0, 3.0), rng.coin() ? y : -y};
}

class Runner {
 public:
  explicit Runner(InstanceResult& r) : r_(r) {}

  // Runs body, which returns a residual; exceptions fail the check.
  void run(const std::string& name, double threshold, const std::function<double()>& body) {
    Check c;
    c.name = name;
    c.threshold = threshold;
    const auto t0 = Clock::now();
    try {
      c.residual = body();
      c.passed = c.residual < threshold;
    } catch (const std::exception& e) {
      c.residual = std::numeric_limits<double>::infinity();
      c.note = e.what();
    }
    c.elapsed_ms = ms_since(t0);
    r_.checks.push_back(std::move(c));
  }

  void skip(const std::string& name, double threshold, std::string note) {
    Check c;
    c.name = name;
    c.threshold = threshold;
    c.passed = true;
    c.skipped = true;
    c.note = std::move(note);
    r_.checks.push_back(std::move(c));
  }

 private:
  InstanceResult& r_;
};

LinearRelation random_relation(Rng& rng, Index d, double tol) {
  const Index k = rng.integer(0, 2 * d);
  return LinearRelation::from_span(rng.gaussian(2 * d, k), d, d, tol);
}

}  // namespace

bool InstanceResult::passed() const {
  return error.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* InstanceResult::find(const std::string& name) const {
  for (const Check& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

InstanceResult verify_instance(const Instance& inst, std::uint64_t check_seed) {
  const auto t0 = Clock::now();
  InstanceResult r;
  r.instance = inst;
  r.n = inst.n;
  r.d = inst.tau.dim;
  Rng rng(check_seed);
  Runner run(r);

  Materialized m;
  try {
    m = materialize(inst);
  } catch (const std::exception& e) {
    r.error = std::string("input: ") + e.what();
    r.elapsed_ms = ms_since(t0);
    return r;
  }
  const BoundaryTriplet& t = m.triplet;
  const RationalNevanlinna& tau = m.tau;
  const double tol = tau.tol();
  const Index d = t.boundary_dim;
  r.n_r = tau.model_dim();

  // Triplet layer.
  run.run("triplet.green", tolerance::green, [&] { return check_green(t); });
  run.run("triplet.valid", 0.5, [&] { return validate_triplet(t).valid(1e-8) ? 0.0 : 1.0; });
  {
    const Complex l = nonreal(rng), z = nonreal(rng);
    run.run("triplet.weyl_identities", tolerance::weyl_identity, [&] {
      if (d == 0) return 0.0;
      const WeylIdentityResiduals w = check_weyl_identities(t, l, z);
      return std::max(w.gamma_identity, w.weyl_identity);
    });
  }
  {
    const LinearRelation theta = random_relation(rng, d, tol);
    run.run("triplet.adjoint_param", tolerance::adjoint_param, [&] {
      return relations_equal(adjoint(extension_of(t, theta)), extension_of(t, adjoint(theta))).residual;
    });
  }

  // Parameter layer.
  {
    const Complex l = nonreal(rng);
    run.run("tau.symmetry", tolerance::tau_symmetry, [&] {
      return relations_equal(eval_tau(tau, std::conj(l)), adjoint(eval_tau(tau, l))).residual;
    });
    run.run("tau.reassembly", tolerance::tau_symmetry, [&] {
      return relations_equal(reassemble_tau(decompose_tau(tau), l, tol), eval_tau(tau, l)).residual;
    });
  }

  // Exit-space oracle.
  std::optional<ExitSpace> es;
  std::optional<DirectCompression> dc;
  run.run("model.build", 0.5, [&] {
    es = build_exit_space(t, tau);
    dc = direct_compression(es->model);
    return 0.0;
  });
  std::optional<CompressionReport> cr;
  run.run("compression.assess", 0.5, [&] {
    cr = assess_compression(t, tau);
    return 0.0;
  });

  if (es) {
    r.dim_r = es->model.dim_Hr;
    r.minimal = minimality(es->model);
    run.run("model.weyl", tolerance::model_weyl, [&] { return es->model_triplet.weyl_residual; });
    run.run("model.self_adjoint", tolerance::relation, [&] {
      return relations_equal(es->model.A_tilde, adjoint(es->model.A_tilde)).residual;
    });
    run.run("compression.S_direct", tolerance::relation,
            [&] { return relations_equal(dc->S, es->reduced.S).residual; });
    run.run("compression.chain", tolerance::relation, [&] { return chain_residual(t.seed, *dc); });
    run.run("compression.forbidden_route", tolerance::relation, [&] {
      return relations_equal(compression_via_forbidden(*es), dc->C).residual;
    });
    if (r.minimal)
      run.run("codimension", 0.5, [&] { return std::abs(static_cast<double>(r.dim_r - r.n_r)); });
    else
      run.skip("codimension", 0.5, "model not minimal");
  }

  if (cr) {
    r.geometric = cr->geometric;
    r.asymptotic = cr->asymptotic;
    if (dc)
      run.run("compression.equivalence", tolerance::relation,
              [&] { return relations_equal(cr->C, dc->C).residual; });
    run.run("compression.self_adjoint", tolerance::relation,
            [&] { return relations_equal(cr->C, adjoint(cr->C)).residual; });
    run.run("compression.general_route", tolerance::relation, [&] {
      return relations_equal(cr->tau_c, compression_param_from_limits(tau)).residual;
    });
    run.run("tau_infinity", tolerance::tau_infinity,
            [&] { return relations_equal(cr->tau_infinity, negate(cr->tau_c)).residual; });
    run.run("flags.routes_agree", 0.5, [&] { return cr->routes_agree ? 0.0 : 1.0; });
    run.run("flags.consistent", 0.5, [&] { return cr->geometric.consistent() ? 0.0 : 1.0; });
    if (cr->N_tau_matrix)
      run.run("flags.transversal_form", tolerance::relation,
              [&] { return cr->transversal_form_residual; });
    else
      run.skip("flags.transversal_form", tolerance::relation, "not transversal");
  }

  // Krein formula at admissible random points.
  if (es) {
    double worst_direct = 0.0, worst_canonical = 0.0;
    int accepted = 0, attempts = 0;
    std::string note;
    while (accepted < kKreinPoints && attempts < 20 * kKreinPoints) {
      ++attempts;
      const Complex l = nonreal(rng);
      try {
        const Matrix k = krein_resolvent(t, tau, l);
        const Matrix direct = generalized_resolvent_direct(es->model, l);
        const Matrix canonical = resolvent(extension_of(t, negate(eval_tau(tau, l))), l);
        const double big = std::max({ss::opnorm(k), ss::opnorm(direct), ss::opnorm(canonical),
                                     ss::opnorm(resolvent(a0_of(t), l))});
        if (big > tolerance::max_resolvent_norm) continue;
        worst_direct = std::max(worst_direct, ss::opnorm(k - direct));
        worst_canonical = std::max(worst_canonical, ss::opnorm(k - canonical));
        ++accepted;
      } catch (const SpectrumError&) {
        continue;
      }
    }
    const bool enough = accepted == kKreinPoints;
    if (!enough) note = "only " + std::to_string(accepted) + " admissible points";
    run.run("krein.direct", tolerance::krein, [&] {
      if (!enough) throw InternalError(note);
      return worst_direct;
    });
    run.run("krein.canonical", tolerance::krein, [&] {
      if (!enough) throw InternalError(note);
      return worst_canonical;
    });
  }

  r.elapsed_ms = ms_since(t0);
  return r;
}

bool BatchReport::all_passed() const { return failures() == 0; }

Index BatchReport::failures() const {
  return std::count_if(results.begin(), results.end(), [](const InstanceResult& r) { return !r.passed(); });
}

std::uint64_t instance_seed(std::uint64_t batch_seed, Index index) {
  return splitmix64(batch_seed + static_cast<std::uint64_t>(index));
}

Profile instance_profile(Index index) { return static_cast<Profile>(index % kProfileCount); }

Instance batch_instance(const BatchConfig& cfg, Index index) {
  Instance inst = generate_instance(cfg.bounds, instance_seed(cfg.seed, index), instance_profile(index));
  inst.tol = cfg.tol;
  return inst;
}

BatchReport verify_batch(const BatchConfig& cfg, Execution exec) {
  if (cfg.count < 0 || cfg.bounds.max_dim < 1 || cfg.bounds.max_boundary < 0 || cfg.bounds.max_poles < 0)
    throw InputError("batch bounds must be positive");
  const auto t0 = Clock::now();
  BatchReport rep;
  rep.config = cfg;
  std::vector<Instance> instances;
  instances.reserve(static_cast<std::size_t>(cfg.count));
  for (Index i = 0; i < cfg.count; ++i) instances.push_back(batch_instance(cfg, i));
  rep.results.resize(instances.size());

  const auto body = [&](Index i) {
    const std::uint64_t s = instance_seed(cfg.seed, i);
    InstanceResult r = verify_instance(instances[static_cast<std::size_t>(i)], splitmix64(s));
    r.index = i;
    r.seed = s;
    r.profile = instance_profile(i);
    rep.results[static_cast<std::size_t>(i)] = std::move(r);
  };
  const Index count = cfg.count;
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (Index i = 0; i < count; ++i) body(i);
  } else {
    for (Index i = 0; i < count; ++i) body(i);
  }
  rep.elapsed_ms = ms_since(t0);
  return rep;
}

namespace {

Json flags_json(const CompressionFlags& f) {
  return {{"subset_A0", f.subset_A0},
          {"equals_A0", f.equals_A0},
          {"equals_A", f.equals_A},
          {"self_adjoint", f.self_adjoint},
          {"transversal_with_A0", f.transversal_with_A0}};
}

// Residuals as JSON numbers; infinity becomes null.
Json residual_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json to_json(const InstanceResult& r, bool include_timing, bool include_instance) {
  Json j;
  j["index"] = r.index;
  j["seed"] = r.seed;
  j["profile"] = to_string(r.profile);
  j["n"] = r.n;
  j["d"] = r.d;
  j["n_r"] = r.n_r;
  j["dim_r"] = r.dim_r;
  j["minimal"] = r.minimal;
  j["flags"] = flags_json(r.asymptotic);
  j["passed"] = r.passed();
  if (!r.error.empty()) j["error"] = r.error;
  Json checks = Json::array();
  for (const Check& c : r.checks) {
    Json cj{{"name", c.name}, {"residual", residual_json(c.residual)}, {"threshold", c.threshold},
            {"passed", c.passed}};
    if (c.skipped) cj["skipped"] = true;
    if (!c.note.empty()) cj["note"] = c.note;
    if (include_timing) cj["elapsed_ms"] = c.elapsed_ms;
    checks.push_back(std::move(cj));
  }
  j["checks"] = checks;
  if (include_timing) j["elapsed_ms"] = r.elapsed_ms;
  if (include_instance) j["instance"] = to_json(r.instance);
  return j;
}

Json to_json(const BatchReport& rep, bool include_timing) {
  Json j;
  j["schema"] = "v1";
  j["rng"] = "mt19937_64";
  j["seed"] = rep.config.seed;
  j["config"] = {{"count", rep.config.count},
                 {"max_dim", rep.config.bounds.max_dim},
                 {"max_boundary", rep.config.bounds.max_boundary},
                 {"max_poles", rep.config.bounds.max_poles},
                 {"tol", rep.config.tol}};

  struct Agg {
    double worst = 0.0;
    double threshold = 0.0;
    Index failures = 0;
    Index skipped = 0;
  };
  std::map<std::string, Agg> agg;
  std::map<std::string, std::array<Index, 2>> sides;
  for (const InstanceResult& r : rep.results) {
    for (const Check& c : r.checks) {
      Agg& a = agg[c.name];
      a.threshold = c.threshold;
      if (c.skipped) {
        ++a.skipped;
        continue;
      }
      a.worst = std::max(a.worst, c.residual);
      if (!c.passed) ++a.failures;
    }
    const Json flags = flags_json(r.asymptotic);
    for (const auto& [name, value] : flags.items()) ++sides[name][value.get<bool>() ? 1 : 0];
  }
  Json checks = Json::object();
  for (const auto& [name, a] : agg)
    checks[name] = {{"max_residual", residual_json(a.worst)}, {"threshold", a.threshold},
                    {"failures", a.failures}, {"skipped", a.skipped}};
  Json flag_sides = Json::object();
  for (const auto& [name, s] : sides) flag_sides[name] = {{"true", s[1]}, {"false", s[0]}};

  j["summary"] = {{"instances", static_cast<Index>(rep.results.size())},
                  {"passed", static_cast<Index>(rep.results.size()) - rep.failures()},
                  {"failed", rep.failures()},
                  {"checks", checks},
                  {"flag_sides", flag_sides}};
  Json inst = Json::array();
  for (const InstanceResult& r : rep.results) inst.push_back(to_json(r, include_timing, !r.passed()));
  j["instances"] = inst;
  if (include_timing) j["timing"] = {{"total_ms", rep.elapsed_ms}};
  return j;
}

std::string to_text(const BatchReport& rep) {
  std::ostringstream os;
  const Json j = to_json(rep, true);
  const Json& s = j["summary"];
  os << "instances " << s["instances"] << "  passed " << s["passed"] << "  failed " << s["failed"]
     << "  seed " << rep.config.seed << "  (" << std::fixed << std::setprecision(1) << rep.elapsed_ms
     << " ms)\n\n";
  os << std::left << std::setw(30) << "check" << std::setw(14) << "max residual" << std::setw(12)
     << "threshold" << "failures  skipped\n";
  for (const auto& [name, c] : s["checks"].items()) {
    std::ostringstream res;
    if (c["max_residual"].is_null())
      res << "inf";
    else
      res << std::scientific << std::setprecision(2) << c["max_residual"].get<double>();
    std::ostringstream thr;
    thr << std::scientific << std::setprecision(0) << c["threshold"].get<double>();
    os << std::setw(30) << name << std::setw(14) << res.str() << std::setw(12) << thr.str()
       << std::setw(10) << c["failures"].get<Index>() << c["skipped"].get<Index>() << "\n";
  }
  os << "\nflag sides (true/false):";
  for (const auto& [name, v] : s["flag_sides"].items())
    os << "  " << name << " " << v["true"] << "/" << v["false"];
  os << "\n";
  for (const InstanceResult& r : rep.results) {
    if (r.passed()) continue;
    os << "FAIL instance " << r.index << " (seed " << r.seed << ", " << to_string(r.profile) << ")";
    if (!r.error.empty()) os << ": " << r.error;
    for (const Check& c : r.checks)
      if (!c.passed) os << "\n  " << c.name << " residual " << c.residual << (c.note.empty() ? "" : "  " + c.note);
    os << "\n";
  }
  return os.str();
}

}  // namespace relext
