#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "table.hpp"

#include "incsmooth/bases.hpp"
#include "incsmooth/cost.hpp"
#include "incsmooth/haar_interp.hpp"
#include "incsmooth/kernels.hpp"
#include "incsmooth/sequences.hpp"
#include "incsmooth/spectrum.hpp"
#include "incsmooth/weights.hpp"

namespace inctool {

using namespace incsmooth;

constexpr const char* kFormatVersion = "1";
constexpr const char* kTieRule = "support-size,coordinates,values";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void base_meta(Table& t, const std::string& command, const json& cfg, std::uint64_t seed) {
  t.add_meta("command", command);
  t.add_meta("format_version", kFormatVersion);
  t.add_meta("tie_break", kTieRule);
  t.add_meta("seed", std::to_string(seed));
  t.add_meta("config", cfg.dump());
}

WeightFamily validated_weights(const json& cfg) {
  WeightFamily f = parse_weights(cfg.at("weights"));
  const ValidationReport rep = validate(f);
  if (!rep.ok()) {
    std::string msg = "weight family validation failed:";
    for (const auto& m : rep.messages) msg += " " + m + ";";
    throw DomainError(msg);
  }
  return f;
}

double default_univariate_decay(const WeightFamily& f) {
  // decay of the univariate sampling problem on the first coordinate space
  return f.kind() == WeightKind::Polynomial ? 0.5 * f.r(1)
                                            : std::numeric_limits<double>::infinity();
}

Table cmd_spectrum(const json& cfg, std::uint64_t /*seed*/) {
  const WeightFamily f = validated_weights(cfg);
  const StreamConfig sc = parse_stream_config(cfg);
  const json sub = cfg.value("spectrum", json::object());
  const auto count = sub.value("count", std::int64_t{64});
  const bool stop_at_horizon = sub.value("stop_at_horizon", false);
  SingularValueStream stream(f, sc);
  Table t;
  t.columns = {"rank", "xi", "multiindex"};
  Emission e;
  for (std::int64_t k = 0; k < count; ++k) {
    const StreamStatus st = stream.try_next(e);
    if (st == StreamStatus::Exhausted) {
      t.add_meta("exhausted_after", std::to_string(k));
      break;
    }
    if (st == StreamStatus::HorizonExceeded) {
      if (!stop_at_horizon)
        throw CoordinateHorizonExceeded(
            "order of emission " + std::to_string(k + 1) +
            " is not certified within j_max = " + std::to_string(stream.config().j_max));
      t.add_meta("horizon_after", std::to_string(k));
      break;
    }
    t.rows.push_back({num(static_cast<long long>(e.rank)), num(e.xi), txt(e.index.to_json())});
  }
  return t;
}

Table cmd_minerr(const json& cfg, std::uint64_t /*seed*/) {
  const WeightFamily f = validated_weights(cfg);
  const StreamConfig sc = parse_stream_config(cfg);
  const json sub = cfg.value("minerr", json::object());
  const auto n_max = sub.value("n_max", std::int64_t{1024});
  const auto row_count = sub.value("rows", std::int64_t{64});
  if (n_max < 0) throw DomainError("minerr needs n_max >= 0");

  SingularValueStream stream(f, sc);
  std::vector<double> err;  // err[n] = xi of emission n + 1
  err.reserve(static_cast<std::size_t>(n_max) + 1);
  Emission e;
  bool exhausted = false;
  for (std::int64_t k = 0; k <= n_max; ++k) {
    const StreamStatus st = stream.try_next(e);
    if (st == StreamStatus::HorizonExceeded)
      throw CoordinateHorizonExceeded("err_" + std::to_string(k) +
                                      " is not certified within j_max = " +
                                      std::to_string(stream.config().j_max));
    if (st == StreamStatus::Exhausted) {
      exhausted = true;
      break;
    }
    err.push_back(e.xi);
  }
  const auto n_lim = static_cast<std::int64_t>(err.size()) - 1;

  double predicted = std::numeric_limits<double>::quiet_NaN();
  try {
    predicted = predicted_decay_all(decay_params(f), sc.variant);
  } catch (const RhoUnavailable&) {
  }

  // logarithmically spaced report ranks, always including n_lim
  std::vector<std::int64_t> ns;
  for (std::int64_t k = 0; k < row_count; ++k) {
    const double tpos = row_count == 1 ? 1.0 : static_cast<double>(k) / (row_count - 1);
    ns.push_back(static_cast<std::int64_t>(
        std::llround(std::exp(tpos * std::log(static_cast<double>(std::max<std::int64_t>(n_lim, 1)))))));
  }
  ns.push_back(n_lim);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  Table t;
  if (exhausted) t.add_meta("exhausted_after", std::to_string(err.size()));
  t.columns = {"n", "err_all", "predicted_decay", "variant", "fitted_slope"};
  for (const std::int64_t n : ns) {
    if (n < 0 || n > n_lim) continue;
    Cell slope = txt("");
    if (n >= 64 && err[static_cast<std::size_t>(n)] > 0.0) {
      const DecayFit fit = decay_fit([&](Index i) { return err[static_cast<std::size_t>(i)]; },
                                     std::max<Index>(8, n / 100), n);
      slope = num(fit.slope);
    }
    t.rows.push_back({num(static_cast<long long>(n)), num(err[static_cast<std::size_t>(n)]),
                      num(predicted), txt(to_string(sc.variant)), slope});
  }
  return t;
}

Table cmd_decay(const json& cfg, std::uint64_t /*seed*/) {
  const WeightFamily f = validated_weights(cfg);
  const DecayParams d = decay_params(f);
  const json sub = cfg.value("decay", json::object());
  const double uni = sub.value("univariate_decay", default_univariate_decay(f));
  Table t;
  t.add_meta("rho", num(d.rho).text);
  t.add_meta("rho_estimated", d.rho_estimated ? "true" : "false");
  t.add_meta("decay_alpha_nu1", num(d.decay_alpha_nu1).text);
  t.add_meta("decay_alpha_1j", num(d.decay_alpha_1j).text);
  t.add_meta("decay_gamma", num(d.decay_gamma).text);
  t.add_meta("univariate_decay", num(uni).text);
  t.columns = {"variant", "predicted_all", "predicted_std_lower", "predicted_std_upper"};
  for (const SpaceVariant v : {SpaceVariant::H, SpaceVariant::G, SpaceVariant::F}) {
    const DecayInterval std_dec = predicted_decay_std(d, uni, v);
    t.rows.push_back({txt(to_string(v)), num(predicted_decay_all(d, v)), num(std_dec.lower),
                      num(std_dec.upper)});
  }
  return t;
}

std::string point_text(const Eigen::VectorXd& x) {
  std::string s;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += (i ? ";" : "") + num(x(i)).text;
  return s;
}

Table cmd_kernel_eval(const json& cfg, std::uint64_t seed) {
  SpaceSpec spec = parse_space_spec(cfg);
  validated_weights(cfg);
  const json sub = cfg.value("kernel_eval", json::object());
  const Eigen::Index dim = spec.univariate() ? 1 : spec.j_max;

  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;
  if (sub.contains("points")) {
    for (const json& p : sub.at("points")) {
      Eigen::VectorXd x(dim), y(dim);
      if (spec.univariate()) {
        x(0) = p.at(0).get<double>();
        y(0) = p.at(1).get<double>();
      } else {
        const auto xs = p.at(0).get<std::vector<double>>();
        const auto ys = p.at(1).get<std::vector<double>>();
        if (static_cast<Eigen::Index>(xs.size()) != dim ||
            static_cast<Eigen::Index>(ys.size()) != dim)
          throw DomainError("kernel point needs j_max coordinates per side");
        for (Eigen::Index i = 0; i < dim; ++i) {
          x(i) = xs[static_cast<std::size_t>(i)];
          y(i) = ys[static_cast<std::size_t>(i)];
        }
      }
      pairs.emplace_back(x, y);
    }
  }
  const auto random_points = sub.value("random_points", std::int64_t{0});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(spec.basis.domain_lo(), spec.basis.domain_hi());
  for (std::int64_t k = 0; k < random_points; ++k) {
    Eigen::VectorXd x(dim), y(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x(i) = u(rng);
    for (Eigen::Index i = 0; i < dim; ++i) y(i) = u(rng);
    pairs.emplace_back(x, y);
  }
  if (pairs.empty()) throw DomainError("kernel_eval needs points or random_points");

  Table t;
  t.columns = {"x", "y", "re", "im", "tail_bound"};
  for (const auto& [x, y] : pairs) {
    const KernelValue kv = kernel_eval(spec, x, y);
    t.rows.push_back({txt(point_text(x)), txt(point_text(y)), num(kv.value.real()),
                      num(kv.value.imag()), num(kv.tail_bound)});
  }
  return t;
}

Table cmd_basis_eval(const json& cfg, std::uint64_t /*seed*/) {
  const BasisFamily basis = parse_basis(cfg);
  const json sub = cfg.value("basis_eval", json::object());
  const auto nu_max = sub.value("nu_max", std::int64_t{8});
  std::vector<double> points;
  if (sub.contains("points")) {
    points = sub.at("points").get<std::vector<double>>();
  } else {
    const auto grid = sub.value("grid", std::int64_t{17});
    if (grid < 2) throw DomainError("basis_eval grid needs at least 2 points");
    for (std::int64_t i = 0; i < grid; ++i)
      points.push_back(basis.domain_lo() + (basis.domain_hi() - basis.domain_lo()) *
                                               static_cast<double>(i) / (grid - 1));
  }
  Table t;
  t.columns = {"nu", "x", "re", "im"};
  for (Index nu = 0; nu <= nu_max; ++nu)
    for (const double x : points) {
      const std::complex<double> v = basis.eval(nu, x);
      t.rows.push_back({num(static_cast<long long>(nu)), num(x), num(v.real()), num(v.imag())});
    }
  return t;
}

Table cmd_haar(const json& cfg, std::uint64_t seed) {
  const json sub = cfg.value("haar", json::object());
  const double r1 = sub.at("r1").get<double>();
  const auto n_min = sub.value("n_min", std::int64_t{0});
  const auto n_max = sub.value("n_max", std::int64_t{8});
  const auto trunc_extra = sub.value("trunc_extra", std::int64_t{10});
  if (n_min < 0 || n_max < n_min) throw DomainError("haar needs 0 <= n_min <= n_max");

  CoefVector f;
  if (sub.contains("coefficients")) {
    for (const json& c : sub.at("coefficients"))
      f.terms.emplace_back(c.at(0).get<Index>(),
                           std::complex<double>(c.at(1).get<double>(),
                                                c.size() > 2 ? c.at(2).get<double>() : 0.0));
  } else {
    const auto count = sub.value("coef_count", std::int64_t{64});
    const auto span = sub.value("coef_span", std::int64_t{4096});
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> pick(0, span);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Index> support;
    while (static_cast<std::int64_t>(support.size()) < count) {
      const Index nu = pick(rng);
      if (std::find(support.begin(), support.end(), nu) == support.end()) support.push_back(nu);
    }
    std::sort(support.begin(), support.end());
    for (const Index nu : support) f.terms.emplace_back(nu, std::complex<double>(g(rng), g(rng)));
  }

  Table t;
  t.columns = {"n", "measured_error", "bound", "worst_lower", "worst_upper"};
  for (std::int64_t n = n_min; n <= n_max; ++n) {
    const MeasuredError me = measured_error(static_cast<int>(n), f, r1);
    const WorstCase wc =
        worst_case_error(static_cast<int>(n), r1, static_cast<int>(n + trunc_extra));
    t.rows.push_back({num(static_cast<long long>(n)), num(me.l2_error), num(me.bound),
                      num(wc.lower), num(wc.upper)});
  }
  return t;
}

Table cmd_verify_embeddings(const json& cfg, std::uint64_t seed) {
  const WeightFamily f = validated_weights(cfg);
  const json sub = cfg.value("verify_embeddings", json::object());
  Table t;
  t.columns = {"check", "detail", "lhs", "rhs", "pass"};

  std::vector<std::pair<Index, Index>> pairs = {{0, 1}, {1, 2}, {2, 3}};
  if (sub.contains("pairs")) {
    pairs.clear();
    for (const json& p : sub.at("pairs")) pairs.emplace_back(p.at(0).get<Index>(), p.at(1).get<Index>());
  }
  for (const auto& [i, j] : pairs) {
    // smoother space j embeds into rougher space i with norm <= 1 exactly when i <= j
    const NormBound nb = embedding_norm(f, i, j);
    const bool expect_unit = i <= j;
    const bool pass = !expect_unit || nb.value <= 1.0 + 1e-9;
    t.rows.push_back({txt("embedding"), txt("i=" + std::to_string(i) + ",j=" + std::to_string(j)),
                      num(nb.value), num(1.0), txt(pass ? "pass" : "fail")});
  }

  if (sub.contains("c0_grid")) {
    SpaceSpec spec = parse_space_spec(cfg);
    if (spec.family != SpaceFamilyKind::UniG && spec.family != SpaceFamilyKind::UniF)
      throw DomainError("norm comparison applies to univariate G or F members");
    const auto grid = sub.at("c0_grid").get<std::vector<double>>();
    const auto sample_count = sub.value("sample_count", std::int64_t{8});
    const auto span = sub.value("sample_span", std::int64_t{16});
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<CoefVector> fs;
    for (std::int64_t k = 0; k < sample_count; ++k) {
      CoefVector v;
      const Index hi = spec.f_type() ? 1 : span;
      for (Index nu = 0; nu <= hi; ++nu) v.terms.emplace_back(nu, std::complex<double>(g(rng), g(rng)));
      fs.push_back(std::move(v));
    }
    double threshold = std::numeric_limits<double>::quiet_NaN();
    for (const double c0 : grid) {
      const Lw2Report rep = verify_lw2(spec, c0, fs);
      for (const auto& chk : rep.checks)
        t.rows.push_back({txt("norm_chain"), txt("c0=" + num(c0).text + ":" + chk.name),
                          num(chk.lhs), num(chk.rhs), txt(chk.ok ? "pass" : "fail")});
      if (rep.all_ok) threshold = std::isnan(threshold) ? c0 : std::min(threshold, c0);
    }
    // sample-based estimate, not the existence constant from the theory
    t.rows.push_back({txt("norm_chain_threshold"), txt("smallest passing c0"), num(threshold),
                      num(threshold), txt(std::isnan(threshold) ? "fail" : "pass")});
  }
  return t;
}

Table cmd_summability(const json& cfg, std::uint64_t /*seed*/) {
  const WeightFamily f = validated_weights(cfg);
  const json sub = cfg.value("summability", json::object());
  const double tau = sub.value("tau", 1.0);
  const double sigma = sub.value("sigma", 0.0);
  const EquivalenceReport eq = check_l4(f, tau, sigma);
  Table t;
  t.add_meta("tau", num(tau).text);
  t.add_meta("sigma", num(sigma).text);
  t.columns = {"check", "verdict", "value"};
  t.rows.push_back({txt("row_sum"), txt(to_string(eq.row)), num(eq.row_sum)});
  t.rows.push_back({txt("col_sum"), txt(to_string(eq.col)), num(eq.col_sum)});
  t.rows.push_back({txt("double_sum"), txt(to_string(eq.both)), num(eq.double_sum)});
  if (sub.contains("q")) {
    const SequenceRule q = parse_rule(sub.at("q"), "q");
    const TailReport tail = check_l5(PositiveSequence{q.eval, std::nullopt, q.log_growth});
    t.add_meta("q_liminf", num(tail.q_liminf).text);
    t.rows.push_back({txt("tail"), txt(to_string(tail.verdict)), num(tail.partial_sum)});
  }
  return t;
}

Table cmd_cost(const json& cfg, std::uint64_t /*seed*/) {
  const WeightFamily f = validated_weights(cfg);
  const StreamConfig sc = parse_stream_config(cfg);
  const json sub = cfg.value("cost", json::object());
  const std::string model_name = sub.value("model", "linear");
  CostModel model = CostModel::linear();
  if (model_name == "fixed")
    model = CostModel::fixed(sub.value("k", 1.0));
  else if (model_name == "exponential")
    model = CostModel::exponential(sub.value("zeta", 0.5), sub.value("scale", 1.0));
  else if (model_name != "linear")
    throw DomainError("unknown cost model '" + model_name + "'");
  const auto count = sub.value("count", std::int64_t{64});
  const bool stop_at_horizon = sub.value("stop_at_horizon", true);

  SingularValueStream stream(f, sc);
  Table t;
  t.add_meta("model", model.label());
  t.columns = {"rank", "active", "cost", "total"};
  double total = 0.0;
  Emission e;
  for (std::int64_t k = 0; k < count; ++k) {
    const StreamStatus st = stream.try_next(e);
    if (st == StreamStatus::Exhausted) break;
    if (st == StreamStatus::HorizonExceeded) {
      if (!stop_at_horizon)
        throw CoordinateHorizonExceeded("cost table beyond the certified horizon");
      t.add_meta("horizon_after", std::to_string(k));
      break;
    }
    const double c = model(static_cast<Index>(e.index.support_size()));
    total += c;
    t.rows.push_back({num(static_cast<long long>(e.rank)),
                      num(static_cast<long long>(e.index.support_size())), num(c), num(total)});
  }
  return t;
}

Table run_command(const std::string& command, const json& cfg, std::uint64_t seed) {
  Table t;
  if (command == "spectrum")
    t = cmd_spectrum(cfg, seed);
  else if (command == "minerr")
    t = cmd_minerr(cfg, seed);
  else if (command == "decay")
    t = cmd_decay(cfg, seed);
  else if (command == "kernel-eval")
    t = cmd_kernel_eval(cfg, seed);
  else if (command == "basis-eval")
    t = cmd_basis_eval(cfg, seed);
  else if (command == "haar")
    t = cmd_haar(cfg, seed);
  else if (command == "verify-embeddings")
    t = cmd_verify_embeddings(cfg, seed);
  else if (command == "summability")
    t = cmd_summability(cfg, seed);
  else if (command == "cost")
    t = cmd_cost(cfg, seed);
  else
    throw DomainError("unknown command '" + command + "'");
  Table with_meta;
  base_meta(with_meta, command, cfg, seed);
  for (auto& m : t.meta) with_meta.meta.push_back(std::move(m));
  with_meta.columns = std::move(t.columns);
  with_meta.rows = std::move(t.rows);
  return with_meta;
}

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  int threads = 1;
  std::uint64_t seed = 0;
};

int severity_of(const std::exception& e) {
  if (dynamic_cast<const CoordinateHorizonExceeded*>(&e)) return 2;
  if (dynamic_cast<const StreamOrderViolation*>(&e)) return 2;
  return 1;
}

int run_all(const std::string& command, const GlobalOpts& g) {
  std::ifstream in(g.config_path);
  if (!in) {
    std::cerr << "error: cannot read config file " << g.config_path << "\n";
    return 1;
  }
  json cfg = json::parse(in);

  std::vector<std::pair<std::string, json>> experiments;
  if (cfg.contains("experiments")) {
    json base = cfg;
    base.erase("experiments");
    std::size_t k = 0;
    for (const json& overlay : cfg.at("experiments")) {
      json merged = base;
      merged.merge_patch(overlay);
      std::string name = merged.value("name", command + "_" + std::to_string(k));
      merged.erase("name");
      experiments.emplace_back(std::move(name), std::move(merged));
      ++k;
    }
  } else {
    std::string name = cfg.value("name", command);
    cfg.erase("name");
    experiments.emplace_back(std::move(name), std::move(cfg));
  }

  std::filesystem::create_directories(g.out_dir);
  const std::string ext = g.format == "json" ? ".json" : ".csv";
  std::atomic<std::size_t> next{0};
  std::atomic<int> exit_code{0};
  std::mutex log_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= experiments.size()) return;
      const auto& [name, ecfg] = experiments[i];
      try {
        const Table t = run_command(command, ecfg, g.seed ^ fnv1a(name));
        const std::string body = g.format == "json" ? render_json(t) : render_csv(t);
        write_atomic(std::filesystem::path(g.out_dir) / (name + ext), body);
      } catch (const std::exception& e) {
        const int sev = severity_of(e);
        int prev = exit_code.load();
        while (prev < sev && !exit_code.compare_exchange_weak(prev, sev)) {
        }
        const std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "error [" << name << "]: " << e.what() << "\n";
      }
    }
  };

  const int nthreads = std::max(1, std::min<int>(g.threads, static_cast<int>(experiments.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return exit_code.load();
}

}  // namespace inctool

int main(int argc, char** argv) {
  inctool::GlobalOpts g;
  CLI::App app{"spectra, decay rates, kernels, and interpolation diagnostics for tensor "
               "products of weighted Hilbert spaces"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"spectrum", "emit the leading singular values with their multi-indices"},
      {"minerr", "emit n-th minimal errors with predicted and fitted decay"},
      {"decay", "emit predicted decay exponents per space variant"},
      {"kernel-eval", "evaluate truncated reproducing kernels with tail bounds"},
      {"basis-eval", "evaluate orthonormal basis functions pointwise"},
      {"haar", "piecewise-constant interpolation errors and worst-case bounds"},
      {"verify-embeddings", "check embedding norms and anchored norm comparisons"},
      {"summability", "convergence verdicts for the driving sums"},
      {"cost", "evaluation cost of the leading spectrum under a cost model"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", g.config_path, "JSON config file")->required();
    sub->add_option("--out", g.out_dir, "output directory");
    sub->add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", g.threads, "worker threads for experiment sweeps");
    sub->add_option("--seed", g.seed, "seed for randomized sampling");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return inctool::run_all(command, g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return inctool::severity_of(e);
  }
}
