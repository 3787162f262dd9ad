#include "mshj/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>

#include "mshj/config.hpp"
#include "mshj/equivalence.hpp"
#include "mshj/reconstruction.hpp"

namespace mshj {

namespace {

struct Options {
  std::string config;
  std::optional<double> tol;
  std::size_t grid_scale = 1;
  std::optional<unsigned> jobs;
  std::string csv;
  bool quiet = false;
  std::string candidate;
  std::string side = "lagrangian";
  std::string mode = "standard";
};

// ---------------------------------------------------------------------------
// Candidates
// ---------------------------------------------------------------------------

struct ParsedCandidate {
  FieldPtr field;  // psi or s
  FieldPtr W;
  std::optional<LagCoefficients> F;
  std::optional<HamCoefficients> G;
};

class EntryReader {
 public:
  explicit EntryReader(const CandidateSpec& c) : name_(c.name), entries_(c.entries) {}

  std::optional<std::string> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    std::string v = it->second;
    entries_.erase(it);
    return v;
  }

  void finish() const {
    if (!entries_.empty())
      throw ConfigError("[candidates." + name_ + "]: unexpected key '" + entries_.begin()->first + "'");
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::map<std::string, std::string> entries_;
};

std::string key2(const std::string& prefix, int a, int b) {
  return prefix + std::to_string(a + 1) + "_" + std::to_string(b + 1);
}

std::string key3(const std::string& prefix, int a, int b, int c) {
  return key2(prefix, a, b) + "_" + std::to_string(c + 1);
}

/// Reads the flat alpha-major components `prefix`A_i; null when none given.
std::vector<Expr> read_block(EntryReader& r, const std::string& prefix, Dimensions d,
                             std::span<const std::string> allowed, bool required) {
  std::vector<Expr> out;
  int found = 0;
  for (int a = 0; a < d.n; ++a)
    for (int i = 0; i < d.m; ++i) {
      auto v = r.take(key2(prefix, a, i));
      if (!v && d.m == 1 && d.n == 1) v = r.take(prefix);
      if (v) {
        out.push_back(parse_in(*v, d, allowed));
        ++found;
      } else {
        out.push_back(Expr::constant(0));
      }
    }
  if (found == 0 && !required) return {};
  if (found < d.jets())
    throw ConfigError("[candidates." + r.name() + "]: needs all " + std::to_string(d.jets()) + " components " +
                      prefix + "A_i");
  return out;
}

FieldPtr read_generating(EntryReader& r, Dimensions d) {
  std::vector<Expr> out;
  int found = 0;
  auto base = base_slots(d);
  for (int i = 0; i < d.m; ++i) {
    auto v = r.take("W" + std::to_string(i + 1));
    if (!v && d.m == 1) v = r.take("W");
    if (v) {
      out.push_back(parse_in(*v, d, base));
      ++found;
    }
  }
  if (found == 0) return nullptr;
  if (found < d.m) throw ConfigError("[candidates." + r.name() + "]: needs all generating components W1..Wm");
  return make_expr_field(d, out);
}

std::optional<LagCoefficients> read_F(EntryReader& r, Dimensions d) {
  if (auto v = r.take("F")) {
    if (*v == "zero") return LagCoefficients::zero(d);
    if (*v == "induced") return LagCoefficients::induced(d);
    if (*v == "solved") return LagCoefficients::solved(d);
    throw ConfigError("[candidates." + r.name() + "]: F must be zero, induced, solved or given by components");
  }
  auto slots = jet_slots(d);
  std::vector<Expr> flat;
  int found = 0;
  for (int j = 0; j < d.m; ++j)
    for (int i = 0; i < d.m; ++i)
      for (int a = 0; a < d.n; ++a) {
        auto v = r.take(key3("F", j, i, a));
        flat.push_back(v ? parse_in(*v, d, slots) : Expr::constant(0));
        found += v ? 1 : 0;
      }
  if (found == 0) return std::nullopt;
  return LagCoefficients::expressions(d, std::move(flat));
}

std::optional<HamCoefficients> read_G(EntryReader& r, Dimensions d) {
  if (auto v = r.take("G")) {
    if (*v == "zero") return HamCoefficients::zero(d);
    if (*v == "induced") return HamCoefficients::induced(d);
    if (*v == "solved") return HamCoefficients::solved(d);
    throw ConfigError("[candidates." + r.name() + "]: G must be zero, induced, solved or given by components");
  }
  auto slots = momentum_slots(d);
  std::vector<Expr> flat;
  int found = 0;
  for (int a = 0; a < d.n; ++a)
    for (int j = 0; j < d.m; ++j)
      for (int i = 0; i < d.m; ++i) {
        auto v = r.take(key3("G", a, j, i));
        flat.push_back(v ? parse_in(*v, d, slots) : Expr::constant(0));
        found += v ? 1 : 0;
      }
  if (found == 0) return std::nullopt;
  return HamCoefficients::expressions(d, std::move(flat));
}

ParsedCandidate parse_candidate(const CandidateSpec& c, Dimensions d) {
  EntryReader r(c);
  ParsedCandidate p;
  auto base = base_slots(d);
  if (c.kind == "jetfield") {
    p.field = make_expr_field(d, read_block(r, "psi", d, base, true));
    p.W = read_generating(r, d);
    p.F = read_F(r, d);
  } else if (c.kind == "section") {
    p.field = make_expr_field(d, read_block(r, "s", d, base, true));
    p.W = read_generating(r, d);
    p.G = read_G(r, d);
  } else if (c.kind == "generating") {
    p.W = read_generating(r, d);
    if (!p.W) throw ConfigError("[candidates." + c.name + "]: generating candidates need W1..Wm");
  } else if (c.kind == "coefficients") {
    p.F = read_F(r, d);
    p.G = read_G(r, d);
  } else {
    throw ConfigError("[candidates." + c.name + "]: kind '" + c.kind + "' cannot be used here");
  }
  r.finish();
  return p;
}

CompleteSolutionFamily parse_family(const CandidateSpec& c, Dimensions d) {
  EntryReader r(c);
  CompleteSolutionFamily f;
  f.dims = d;
  const int K = d.jets();
  std::vector<std::string> lam;
  for (int k = 0; k < K; ++k) lam.push_back("lam" + std::to_string(k + 1));
  std::vector<std::string> slots = lam;
  for (const auto& s : base_slots(d)) slots.push_back(s);

  std::string prefix = "psi";
  if (auto side = r.take("side")) {
    if (*side == "lagrangian") prefix = "psi";
    else if (*side == "hamiltonian") prefix = "s";
    else throw ConfigError("[candidates." + c.name + "]: side must be lagrangian or hamiltonian");
  } else if (c.entries.count(key2("s", 0, 0)) || c.entries.count("s")) {
    prefix = "s";
  }
  f.side = prefix == "psi" ? CompleteSolutionFamily::Side::Lagrangian : CompleteSolutionFamily::Side::Hamiltonian;
  f.components = read_block(r, prefix, d, slots, true);
  for (const auto& name : lam) {
    auto v = r.take(name);
    if (!v) throw ConfigError("[candidates." + c.name + "]: missing parameter range " + name + " = lo, hi, count");
    auto nums = parse_number_list(*v, "[candidates." + c.name + "] " + name);
    if (nums.size() != 3 || nums[2] < 1 || nums[0] > nums[1])
      throw ConfigError("[candidates." + c.name + "] " + name + ": expected lo, hi, count");
    f.lambda_grid.axes.push_back({name, nums[0], nums[1], static_cast<std::size_t>(nums[2])});
  }
  if (auto v = r.take("constraint")) f.constraint = parse_in(*v, d, lam);
  r.finish();
  return f;
}

const CandidateSpec& pick(const RunConfig& cfg, const std::string& name, std::initializer_list<const char*> kinds,
                          const std::string& purpose) {
  auto ok = [&](const CandidateSpec& c) {
    return std::any_of(kinds.begin(), kinds.end(), [&](const char* k) { return c.kind == k; });
  };
  if (!name.empty()) {
    for (const auto& c : cfg.candidates)
      if (c.name == name) {
        if (!ok(c)) throw ConfigError("candidate '" + name + "' (kind " + c.kind + ") cannot be used for " + purpose);
        return c;
      }
    throw ConfigError("no candidate named '" + name + "'");
  }
  for (const auto& c : cfg.candidates)
    if (ok(c)) return c;
  std::string list;
  for (const char* k : kinds) list += (list.empty() ? "" : " or ") + std::string(k);
  throw ConfigError(purpose + " needs a " + list + " candidate");
}

/// First `coefficients` candidate, if any.
std::optional<ParsedCandidate> shared_coefficients(const RunConfig& cfg, Dimensions d) {
  for (const auto& c : cfg.candidates)
    if (c.kind == "coefficients") return parse_candidate(c, d);
  return std::nullopt;
}

FieldPtr shared_generating(const RunConfig& cfg, Dimensions d) {
  for (const auto& c : cfg.candidates)
    if (c.kind == "generating") return parse_candidate(c, d).W;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Context shared by the subcommands
// ---------------------------------------------------------------------------

struct Context {
  Options opt;
  RunConfig cfg;
  ModelBundle model;
  double tol = 1e-8;
  SweepOptions sweep;
  std::ostream* out = nullptr;

  Dimensions dims() const { return model.theory ? model.theory->dims() : model.hamiltonian->dims(); }
  GridSpec grid() const { return model.grid.scaled(opt.grid_scale); }
  std::string csv_path() const { return !opt.csv.empty() ? opt.csv : cfg.csv.value_or(""); }

  const FieldTheory& need_theory(const std::string& what) const {
    if (!model.theory) throw ConfigError(what + " needs a Lagrangian");
    return *model.theory;
  }
  const HamiltonianPtr& need_hamiltonian(const std::string& what) const {
    if (!model.hamiltonian) throw ConfigError(what + " needs a Hamiltonian");
    return model.hamiltonian;
  }
};

Context make_context(const Options& opt) {
  Context ctx;
  ctx.opt = opt;
  ctx.cfg = RunConfig::load(opt.config);
  ctx.model = resolve_model(ctx.cfg);
  ctx.tol = opt.tol.value_or(ctx.cfg.tolerance);
  if (!(ctx.tol > 0)) throw ConfigError("tolerance must be positive");
  if (opt.grid_scale < 1) throw ConfigError("--grid-scale must be >= 1");
  unsigned jobs = 1;
  if (const char* env = std::getenv("MSHJ_JOBS")) {
    try {
      jobs = static_cast<unsigned>(std::max(1, std::stoi(env)));
    } catch (const std::exception&) {
      throw ConfigError(std::string("MSHJ_JOBS='") + env + "' is not an integer");
    }
  }
  if (ctx.cfg.jobs) jobs = *ctx.cfg.jobs;
  if (opt.jobs) jobs = std::max(1u, *opt.jobs);
  ctx.sweep.jobs = jobs;
  ctx.sweep.policy = ctx.cfg.policy;
  return ctx;
}

void write_pointwise_csv(const std::string& path, const ResidualReport& rep, const GridSpec& grid) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  for (std::size_t k = 0; k < rep.axis_names.size(); ++k) f << (k ? "," : "") << rep.axis_names[k];
  for (const auto& fam : rep.families) f << "," << fam.name;
  f << "\n" << std::setprecision(17);
  std::vector<double> pt(grid.axes.size());
  for (std::size_t i = 0; i < rep.grid_size; ++i) {
    grid.point(i, pt);
    for (std::size_t k = 0; k < pt.size(); ++k) f << (k ? "," : "") << pt[k];
    for (const auto& fam : rep.families) f << "," << (i < fam.pointwise.size() ? fam.pointwise[i] : 0.0);
    f << "\n";
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_check_theory(Context& ctx) {
  const FieldTheory& theory = ctx.need_theory("check-theory");
  std::ostream& out = *ctx.out;
  const GridSpec jet_grid = ctx.model.jet_grid;
  RegularityReport reg = regularity_check(theory, jet_grid, 1e-8);
  out << "model: " << ctx.model.name << "\n";
  out << "L = " << theory.lagrangian().str() << "\n";
  if (ctx.model.closed_form) out << "H = " << ctx.model.closed_form->describe() << "\n";
  out << "regularity: " << (reg.regular ? "regular" : "NOT regular") << " (min |det d2L/dv2| = " << fmt(reg.min_abs_det)
      << " over " << reg.points << " jet points)\n";
  if (!reg.regular) return kResidualFailure;

  // Legendre round trip and, when available, derived vs closed-form H.
  const Dimensions d = theory.dims();
  const std::size_t total = jet_grid.size();
  const std::size_t stride = std::max<std::size_t>(1, total / 10000);
  std::vector<double> slots(jet_grid.axes.size());
  double round_trip = 0.0, h_gap = 0.0;
  std::size_t samples = 0, h_samples = 0;
  for (std::size_t k = 0; k < total; k += stride) {
    jet_grid.point(k, slots);
    JetPoint pt = jet_point_from_slots(d, slots);
    RestrictedMomentumPoint mp = restricted_legendre(theory, pt);
    double err;
    try {
      JetPoint back = inverse_legendre(theory, mp);
      err = (back.v - pt.v).lpNorm<Eigen::Infinity>();
    } catch (const NumericalError&) {
      err = std::numeric_limits<double>::infinity();
    }
    round_trip = std::max(round_trip, err);
    ++samples;
    if (ctx.model.closed_form && ctx.model.derived) {
      try {
        double gap = std::abs(hamiltonian(*ctx.model.closed_form, mp) - hamiltonian(*ctx.model.derived, mp));
        h_gap = std::max(h_gap, gap);
        ++h_samples;
      } catch (const OutOfDomain&) {
      }
    }
  }
  const bool pass = round_trip < 1e-8;
  out << "legendre round trip: max |Leg^-1(Leg(v)) - v| = " << fmt(round_trip) << " over " << samples << " points"
      << (pass ? "" : "  FAIL") << "\n";
  if (h_samples) out << "derived vs closed-form H: max gap " << fmt(h_gap) << " over " << h_samples << " points\n";
  return pass ? kPass : kResidualFailure;
}

int cmd_verify(Context& ctx) {
  const Dimensions d = ctx.dims();
  const Suite suite = parse_suite(ctx.opt.mode);
  const auto coeffs = shared_coefficients(ctx.cfg, d);
  const GridSpec grid = ctx.grid();
  SweepOptions sweep = ctx.sweep;
  sweep.keep_pointwise = !ctx.csv_path().empty();
  PointEvaluator eval;
  std::string title;

  if (ctx.opt.side == "lagrangian") {
    ctx.need_theory("the Lagrangian side");
    const CandidateSpec& spec = pick(ctx.cfg, ctx.opt.candidate, {"jetfield"}, "verify --side lagrangian");
    ParsedCandidate c = parse_candidate(spec, d);
    LagrangianCandidate cand{c.field, c.W ? c.W : shared_generating(ctx.cfg, d),
                             c.F ? *c.F : (coeffs && coeffs->F ? *coeffs->F : ctx.model.F)};
    if (suite == Suite::Classic && !cand.W) throw ConfigError("the classic suite needs generating components W1..Wm");
    eval = lagrangian_evaluator(ctx.model.theory, cand, suite);
    title = "lagrangian " + std::string(suite_name(suite)) + " [" + spec.name + "]";
  } else if (ctx.opt.side == "hamiltonian") {
    HamiltonianPtr h = ctx.need_hamiltonian("the Hamiltonian side");
    const bool classic = suite == Suite::Classic;
    const CandidateSpec& spec = classic ? pick(ctx.cfg, ctx.opt.candidate, {"section", "generating"}, "verify --side hamiltonian")
                                        : pick(ctx.cfg, ctx.opt.candidate, {"section"}, "verify --side hamiltonian");
    ParsedCandidate c = parse_candidate(spec, d);
    HamiltonianCandidate cand{c.field, c.W ? c.W : shared_generating(ctx.cfg, d),
                              c.G ? *c.G : (coeffs && coeffs->G ? *coeffs->G : ctx.model.G)};
    if (classic && !cand.W) throw ConfigError("the classic suite needs generating components W1..Wm");
    eval = hamiltonian_evaluator(h, cand, suite);
    title = "hamiltonian " + std::string(suite_name(suite)) + " [" + spec.name + "]";
  } else {
    throw ConfigError("--side must be lagrangian or hamiltonian");
  }

  ResidualReport rep = grid_report(eval, grid, ctx.tol, sweep);
  if (ctx.opt.quiet)
    *ctx.out << (rep.pass ? "PASS" : "FAIL") << " " << fmt(rep.max_abs()) << "\n";
  else
    print_report(*ctx.out, rep, title);
  if (!ctx.csv_path().empty()) write_pointwise_csv(ctx.csv_path(), rep, grid);
  return rep.pass ? kPass : kResidualFailure;
}

int cmd_equivalence(Context& ctx) {
  const Dimensions d = ctx.dims();
  ctx.need_theory("equivalence");
  HamiltonianPtr h = ctx.need_hamiltonian("equivalence");
  const CandidateSpec& spec = pick(ctx.cfg, ctx.opt.candidate, {"jetfield"}, "equivalence");
  ParsedCandidate c = parse_candidate(spec, d);
  const auto coeffs = shared_coefficients(ctx.cfg, d);
  LagCoefficients F = c.F ? *c.F : (coeffs && coeffs->F ? *coeffs->F : ctx.model.F);
  HamCoefficients G = coeffs && coeffs->G ? *coeffs->G : ctx.model.G;
  FieldPtr W = c.W ? c.W : shared_generating(ctx.cfg, d);
  EquivalenceReport rep = equivalence_report(ctx.model.theory, h, c.field, F, G, ctx.grid(), ctx.tol, W, ctx.sweep);
  std::ostream& out = *ctx.out;
  if (!ctx.opt.quiet) {
    print_report(out, rep.lagrangian, "lagrangian [" + spec.name + "]");
    print_report(out, rep.hamiltonian, "hamiltonian [Leg o " + spec.name + "]");
    out << "transport: " << (rep.transport_consistent ? "consistent" : "INCONSISTENT")
        << " (worst excess over 10x source + 1e-10: " << fmt(rep.worst_transport_excess) << ")\n";
  }
  out << "verdict: " << verdict_name(rep.verdict) << "\n";
  return rep.verdict == Verdict::PassPass && rep.transport_consistent ? kPass : kResidualFailure;
}

int cmd_reconstruct(Context& ctx) {
  const Dimensions d = ctx.dims();
  if (!ctx.cfg.reconstruct) throw ConfigError("reconstruct needs a [reconstruct] section");
  const ReconstructSpec& r = *ctx.cfg.reconstruct;
  if (static_cast<int>(r.x0.size()) != d.m || static_cast<int>(r.lo.size()) != d.m ||
      static_cast<int>(r.hi.size()) != d.m)
    throw ConfigError("[reconstruct] x0, lo and hi need m = " + std::to_string(d.m) + " entries");
  if (static_cast<int>(r.u0.size()) != d.n)
    throw ConfigError("[reconstruct] u0 needs n = " + std::to_string(d.n) + " entries");
  const CandidateSpec& spec = pick(ctx.cfg, ctx.opt.candidate, {"jetfield"}, "reconstruct");
  ParsedCandidate c = parse_candidate(spec, d);

  GridSpec box = make_box(r.lo, r.hi, r.steps * ctx.opt.grid_scale);
  Vector u0 = Eigen::Map<const Vector>(r.u0.data(), static_cast<Eigen::Index>(r.u0.size()));
  SectionTrace trace = integrate_distribution(*c.field, box, r.x0, u0, r.order);
  if (!ctx.csv_path().empty()) {
    std::ofstream f(ctx.csv_path(), std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + ctx.csv_path() + "'");
    trace.write_csv(f);
  }

  std::ostream& out = *ctx.out;
  bool pass = true;
  TraceResidual hol = holonomy_residual(trace, *c.field);
  pass = pass && hol.max_abs <= r.holonomy_tol;
  out << "trace: " << trace.nodes() << " nodes, " << trace.method << "\n";
  out << "holonomy residual: max " << fmt(hol.max_abs) << " over " << hol.points << " interior nodes (tol "
      << r.holonomy_tol << ")\n";
  if (ctx.model.theory && trace.nodes() > 0) {
    TraceResidual el = el_section_residual(*ctx.model.theory, trace);
    pass = pass && el.max_abs <= r.el_tol;
    out << "euler-lagrange residual: max " << fmt(el.max_abs) << " (tol " << r.el_tol << ")\n";
  }
  if (d.m >= 2) {
    PathIndependence pi = path_independence_check(*c.field, box, r.x0, u0, r.path_tol);
    pass = pass && pi.pass;
    out << "path independence: discrepancy " << fmt(pi.discrepancy) << (pi.pass ? "" : "  (order dependent)") << "\n";
  }
  out << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kPass : kResidualFailure;
}

int cmd_complete(Context& ctx) {
  const Dimensions d = ctx.dims();
  const CandidateSpec& spec = pick(ctx.cfg, ctx.opt.candidate, {"family"}, "complete");
  CompleteSolutionFamily fam = parse_family(spec, d);
  CompleteCheckSettings s;
  s.tol = ctx.tol;
  s.sweep = ctx.sweep;
  const auto coeffs = shared_coefficients(ctx.cfg, d);
  LagCoefficients F = coeffs && coeffs->F ? *coeffs->F : ctx.model.F;
  HamCoefficients G = coeffs && coeffs->G ? *coeffs->G : ctx.model.G;
  CompleteSolutionReport rep = complete_solution_check(ctx.model.theory, ctx.model.hamiltonian, fam, F, G, ctx.grid(), s);
  std::ostream& out = *ctx.out;
  out << "slices: " << rep.slices_passed << "/" << rep.slices << " pass (worst residual " << fmt(rep.worst_slice_residual)
      << ")\n";
  out << "|det dPhi/dlambda|: min " << fmt(rep.min_abs_det) << ", max " << fmt(rep.max_abs_det) << " over "
      << rep.det_samples << " samples\n";
  out << "coverage: " << rep.probes_hit << "/" << rep.probes << " probes (worst error " << fmt(rep.worst_probe_error)
      << ")\n";
  out << (rep.pass ? "PASS" : "FAIL") << "\n";
  return rep.pass ? kPass : kResidualFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multisymplectic Hamilton-Jacobi residual checker", "mshj"};
  app.require_subcommand(1);
  Options opt;
  unsigned jobs = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "run configuration")->required();
    sub->add_option("--tol", opt.tol, "residual tolerance");
    sub->add_option("--grid-scale", opt.grid_scale, "multiply every grid count")->check(CLI::PositiveNumber);
    sub->add_option("--jobs", jobs, "worker threads (default: MSHJ_JOBS or 1)")->check(CLI::PositiveNumber);
    sub->add_option("--csv", opt.csv, "CSV output path");
    sub->add_flag("--quiet", opt.quiet, "one-line output");
    sub->add_option("--candidate", opt.candidate, "candidate name (default: first of the right kind)");
  };
  CLI::App* check = app.add_subcommand("check-theory", "regularity and Legendre round trip");
  CLI::App* verify = app.add_subcommand("verify", "run a residual suite on a candidate");
  CLI::App* equiv = app.add_subcommand("equivalence", "Lagrangian and transported Hamiltonian verdicts");
  CLI::App* recon = app.add_subcommand("reconstruct", "integrate a jet field to a section");
  CLI::App* complete = app.add_subcommand("complete", "check a complete-solution family");
  for (CLI::App* sub : {check, verify, equiv, recon, complete}) common(sub);
  verify->add_option("--side", opt.side, "lagrangian | hamiltonian")
      ->check(CLI::IsMember({"lagrangian", "hamiltonian"}));
  verify->add_option("--mode", opt.mode, "generalized | standard | classic | coefficients")
      ->check(CLI::IsMember({"generalized", "standard", "classic", "coefficients"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "mshj: " << e.what() << "\n";
    return kInputError;
  }
  if (jobs > 0) opt.jobs = jobs;

  try {
    Context ctx = make_context(opt);
    ctx.out = &out;
    if (*check) return cmd_check_theory(ctx);
    if (*verify) return cmd_verify(ctx);
    if (*equiv) return cmd_equivalence(ctx);
    if (*recon) return cmd_reconstruct(ctx);
    return cmd_complete(ctx);
  } catch (const InputError& e) {
    err << "mshj: error: " << e.what() << "\n";
    return kInputError;
  } catch (const PointFailure& e) {
    err << "mshj: " << (e.input_error() ? "error" : "numerical failure") << ": " << e.what() << "\n";
    return e.input_error() ? kInputError : kNumericalFailure;
  } catch (const DegenerateJacobian& e) {
    err << "mshj: " << e.what() << "\n";
    return kResidualFailure;
  } catch (const CoverageMiss& e) {
    err << "mshj: " << e.what() << "\n";
    return kResidualFailure;
  } catch (const NumericalError& e) {
    err << "mshj: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "mshj: internal error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace mshj
