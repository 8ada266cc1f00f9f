// relext: batch verification driver and worked examples.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "relext/exitspace.hpp"
#include "relext/extension.hpp"
#include "relext/instance.hpp"
#include "relext/random.hpp"
#include "relext/subspace.hpp"
#include "relext/verify.hpp"

using namespace relext;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitInput = 2;

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw InputError("cannot write " + out);
  f << text;
}

Json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

std::string show(Complex z) {
  std::ostringstream os;
  os << std::setprecision(6);
  const double re = std::abs(z.real()) < 1e-12 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 1e-12 ? 0.0 : z.imag();
  if (im == 0.0)
    os << re;
  else if (re == 0.0)
    os << im << "i";
  else
    os << re << (im < 0 ? "-" : "+") << std::abs(im) << "i";
  return os.str();
}

std::string show(const Matrix& m) {
  std::ostringstream os;
  os << "[";
  for (Index i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (Index j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << show(m(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string describe(const LinearRelation& t) {
  if (auto op = as_operator(t)) return "graph of " + show(*op);
  const PartsReport p = parts(t);
  std::ostringstream os;
  os << "relation of dim " << t.dim() << " (dom " << p.dom.cols() << ", mul " << p.mul.cols() << ")";
  if (p.dom.cols() == 0) os << " = {0} x C^" << p.mul.cols();
  return os.str();
}

const char* yes(bool b) { return b ? "yes" : "no"; }

int run_demo(const std::string& name) {
  const SymmetricSeed seed = make_seed(LinearRelation::zero(1, 1));
  Matrix g0(1, 2), g1(1, 2);
  g0 << 1.0, 0.0;
  g1 << 0.0, 1.0;
  const BoundaryTriplet t = explicit_triplet(seed, g0, g1);

  TauCoefficients c;
  c.dim = 1;
  c.mul_basis = Matrix(1, 0);
  c.A = Matrix::Zero(1, 1);
  c.B = Matrix::Zero(1, 1);
  std::string formula;
  if (name == "swap") {
    c.poles.push_back({0.0, Matrix::Ones(1, 1)});
    formula = "tau(l) = -1/l";
  } else if (name == "canonical") {
    c.A(0, 0) = 0.7;
    formula = "tau(l) = 0.7 (constant)";
  } else if (name == "a0") {
    c.B(0, 0) = 1.0;
    formula = "tau(l) = l";
  } else {
    throw InputError("unknown demo '" + name + "' (swap, canonical, a0)");
  }
  const RationalNevanlinna tau(c);

  std::cout << "demo " << name << "\n";
  std::cout << "  A = {{0, 0}} in C, Gamma0 = f, Gamma1 = f', " << formula << "\n";
  const ExitSpace es = build_exit_space(t, tau);
  std::cout << "  exit space: dim H = " << es.model.dim_H << ", dim H_r = " << es.model.dim_Hr
            << ", minimal: " << yes(minimality(es.model)) << "\n";
  std::cout << "  A~  = " << describe(es.model.A_tilde) << "\n";
  const CompressionReport rep = classify_compression(t, tau);
  std::cout << "  tau_c = " << describe(rep.tau_c) << "\n";
  std::cout << "  C   = " << describe(rep.C) << "\n";
  const DirectCompression dc = direct_compression(es.model);
  std::cout << "  direct compression matches C: residual "
            << relations_equal(dc.C, rep.C).residual << "\n";
  const CompressionFlags& f = rep.asymptotic;
  std::cout << "  flags: C ⊆ A0 " << yes(f.subset_A0) << ", C = A0 " << yes(f.equals_A0) << ", C = A "
            << yes(f.equals_A) << ", self-adjoint " << yes(f.self_adjoint) << ", transversal "
            << yes(f.transversal_with_A0) << " (routes agree: " << yes(rep.routes_agree) << ")\n";
  if (rep.N_tau_matrix) std::cout << "  N_tau = " << show(*rep.N_tau_matrix) << "\n";
  std::cout << "  n_r = " << rep.n_r << "\n";
  for (const Complex l : {Complex{0.0, 2.0}, Complex{1.0, 1.0}, Complex{-0.5, -1.5}}) {
    const Matrix k = krein_resolvent(t, tau, l);
    const Matrix direct = generalized_resolvent_direct(es.model, l);
    std::cout << "  l = " << show(l) << ": Krein resolvent " << show(k) << ", |Krein - direct| "
              << subspace::opnorm(k - direct) << ", |Krein - (A_{-tau(l)} - l)^-1| "
              << check_resolvent_identity(t, tau, l) << "\n";
  }
  return kExitOk;
}

// Accepts a bare instance or a failure entry {seed, instance} from a report.
int run_check(const std::string& path, std::uint64_t seed, const std::string& format,
              const std::string& out) {
  const Json doc = read_json(path);
  Json inst_json = doc;
  std::uint64_t s = seed;
  if (doc.contains("instance")) {
    inst_json = doc.at("instance");
    if (doc.contains("seed")) s = doc.at("seed").get<std::uint64_t>();
  }
  const Instance inst = instance_from_json(inst_json);
  InstanceResult r = verify_instance(inst, splitmix64(s));
  r.seed = s;
  if (r.error.rfind("input: ", 0) == 0) throw InputError(r.error.substr(7));
  if (format == "json") {
    emit(to_json(r, true, !r.passed()).dump(2) + "\n", out);
  } else {
    std::ostringstream os;
    os << (r.passed() ? "PASS" : "FAIL") << "  n " << r.n << "  d " << r.d << "  n_r " << r.n_r
       << "  dim H_r " << r.dim_r << "\n";
    for (const Check& c : r.checks)
      os << "  " << std::left << std::setw(30) << c.name
         << (c.skipped ? "skipped" : (c.passed ? "ok     " : "FAIL   ")) << "  " << c.residual
         << (c.note.empty() ? "" : "  " + c.note) << "\n";
    emit(os.str(), out);
  }
  return r.passed() ? kExitOk : kExitInvariant;
}

int run_model(const std::string& path, const std::string& out) {
  const Instance inst = instance_from_json(read_json(path));
  const Materialized m = materialize(inst);
  const ExitSpace es = build_exit_space(m.triplet, m.tau);
  emit(model_dump(es.model.A_tilde.frame(), es.model.dim_H, es.model.dim_Hr).dump(2) + "\n", out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional exit-space extensions: verification driver"};
  app.require_subcommand(1);

  BatchConfig cfg;
  std::string format = "text";
  std::string out;
  bool serial = false;
  auto* verify = app.add_subcommand("verify", "generate random instances and run the invariant suite");
  verify->add_option("--count", cfg.count, "number of instances")->check(CLI::NonNegativeNumber);
  verify->add_option("--max-dim", cfg.bounds.max_dim, "largest space dimension n")->check(CLI::PositiveNumber);
  verify->add_option("--max-boundary", cfg.bounds.max_boundary, "largest boundary dimension")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--max-poles", cfg.bounds.max_poles, "largest number of poles")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", cfg.seed, "batch seed");
  verify->add_option("--tol", cfg.tol, "rank tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", out, "write the report here instead of stdout");
  verify->add_flag("--serial", serial, "run without the thread pool");

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "walk through a worked example");
  demo->add_option("name", demo_name, "swap, canonical or a0")->required();

  std::string path;
  std::uint64_t check_seed = 1;
  auto* check = app.add_subcommand("check", "run the invariant suite on an instance file");
  check->add_option("file", path, "instance or failure entry (JSON)")->required();
  check->add_option("--seed", check_seed, "seed for random test points");
  check->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  check->add_option("--out", out, "output path");

  Index gen_index = 0;
  auto* generate = app.add_subcommand("generate", "print one batch instance as JSON");
  generate->add_option("--seed", cfg.seed, "batch seed");
  generate->add_option("--index", gen_index, "instance index within the batch")->check(CLI::NonNegativeNumber);
  generate->add_option("--max-dim", cfg.bounds.max_dim)->check(CLI::PositiveNumber);
  generate->add_option("--max-boundary", cfg.bounds.max_boundary)->check(CLI::NonNegativeNumber);
  generate->add_option("--max-poles", cfg.bounds.max_poles)->check(CLI::NonNegativeNumber);
  generate->add_option("--tol", cfg.tol)->check(CLI::PositiveNumber);
  generate->add_option("--out", out, "output path");

  auto* model = app.add_subcommand("model", "dump the exit-space relation of an instance");
  model->add_option("file", path, "instance file (JSON)")->required();
  model->add_option("--out", out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*verify) {
      const BatchReport rep = verify_batch(cfg, serial ? Execution::serial : Execution::parallel);
      emit(format == "json" ? to_json(rep).dump(2) + "\n" : to_text(rep), out);
      return rep.all_passed() ? kExitOk : kExitInvariant;
    }
    if (*demo) return run_demo(demo_name);
    if (*check) return run_check(path, check_seed, format, out);
    if (*generate) {
      emit(to_json(batch_instance(cfg, gen_index)).dump(2) + "\n", out);
      return kExitOk;
    }
    if (*model) return run_model(path, out);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}
