// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   geomix_acceptance <path to geomix_unit_tests> [criterion numbers...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "fixtures.hpp"
#include "geomix/cli.hpp"
#include "geomix/evaluation.hpp"
#include "geomix/frechet_regression.hpp"
#include "geomix/io.hpp"
#include "geomix/mixed_effects.hpp"
#include "geomix/simulation.hpp"

namespace {

using namespace geomix;
namespace fs = std::filesystem;

// Replicate r of every Monte-Carlo criterion uses seed kBaseSeed + r.
constexpr std::uint64_t kBaseSeed = 1;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

// f(r) for r = 0..reps-1, in parallel, results by index.
std::vector<double> replicates(std::size_t reps, const std::function<double(std::uint64_t)>& f) {
  std::vector<double> out(reps);
  parallel_for(reps, worker_count(), [&](std::size_t r) { out[r] = f(kBaseSeed + r); });
  return out;
}

std::string num(double x, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

SimulationConfig config(Setting s, std::size_t n, Design d, double alpha, std::uint64_t seed) {
  SimulationConfig c;
  c.setting = s;
  c.n = n;
  c.design = d;
  c.alpha = alpha;
  c.seed = seed;
  return c;
}

Eigen::VectorXd scalar(double z) { return Eigen::VectorXd::Constant(1, z); }

// 1. Noise-free subjects: per-subject GFR reproduces the geodesic.
Outcome geodesic_recovery() {
  const std::vector<double> ts{0.0, 0.25, 0.5, 0.75, 1.0};
  bool pass = true;
  std::string detail;
  const auto kinds = testing::all_kinds();
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    const auto& kind = kinds[k];
    Philox rng(kBaseSeed, k);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto a = testing::random_point(kind, rng);
      const auto b = kind.tag() == SpaceTag::sphere ? testing::random_neighbour(a, 1.5, rng)
                                                    : testing::random_point(kind, rng);
      const auto times = testing::random_times(static_cast<std::size_t>(rng.uniform_int(3, 8)), rng);
      const auto subj = testing::noise_free_subject(a, b, times);
      const auto X = column(subj.times);
      const auto stats = predictor_stats(X);
      for (double t : ts) {
        const auto fit = gfr_fit(subj.obs, gfr_weights(stats, X, scalar(t)));
        worst = std::max(worst, dist(fit, geodesic_point(a, b, t)));
      }
    }
    const double tol = kind.tag() == SpaceTag::euclidean1d ? 1e-10 : 1e-6;
    pass &= worst <= tol;
    detail += std::string(to_string(kind.tag())) + " max " + num(worst, 2) + " (tol " + num(tol, 1) + ") ";
  }
  return {pass, detail};
}

// 2. Zero perturbation: the error at z = 0 shrinks like n^{-1/2}.
Outcome root_n_rate() {
  const std::vector<std::size_t> ns{50, 200, 800};
  std::vector<double> log_n, log_e, log_w;
  for (std::size_t n : ns) {
    log_n.push_back(std::log(static_cast<double>(n)));
    const auto e = replicates(50, [&](std::uint64_t seed) {
      const auto model = fit_two_step(testing::euclidean_dataset(n, seed));
      return product_dist(predict_endpoints(model, scalar(0.0)), testing::euclidean_truth(0.0));
    });
    log_e.push_back(std::log(median(e)));
    const auto w = replicates(50, [&](std::uint64_t seed) {
      const auto cfg = config(Setting::I, n, Design::sparse, 0.0, seed);
      const auto ds = generate_dataset(cfg);
      const auto model = fit_two_step(ds.subjects);
      return product_dist(predict_endpoints(model, scalar(0.0)), population_endpoints(cfg, ds.kind, 0.0));
    });
    log_w.push_back(std::log(median(w)));
  }
  const double se = ols_slope(log_n, log_e);
  const double sw = ols_slope(log_n, log_w);
  const bool pass = se >= -0.75 && se <= -0.25 && sw >= -0.75 && sw <= -0.25;
  return {pass, "log-log slope euclidean1d " + num(se) + ", wasserstein1d " + num(sw) +
                    " (need [-0.75, -0.25])"};
}

// 3. Smaller perturbation, smaller estimation error (n = 400 sparse, fixed endpoints).
Outcome perturbation_levels() {
  const std::vector<double> alphas{0.3, 0.1, 0.01};
  std::vector<double> med;
  std::string detail = "median d_M at z=0:";
  for (double alpha : alphas) {
    const auto e = replicates(50, [&](std::uint64_t seed) {
      auto cfg = config(Setting::I, 400, Design::sparse, alpha, seed);
      cfg.random_effects = false;
      const auto ds = generate_dataset(cfg);
      const auto model = fit_two_step(ds.subjects);
      return product_dist(predict_endpoints(model, scalar(0.0)), population_endpoints(cfg, ds.kind, 0.0));
    });
    med.push_back(median(e));
    detail += " alpha=" + num(alpha) + " " + num(med.back());
  }
  return {med[0] > med[1] && med[1] > med[2], detail};
}

std::vector<double> ise_reps(Setting s, std::size_t n, Design d) {
  return replicates(50, [&](std::uint64_t seed) { return replicate_ise(config(s, n, d, 0.1, seed)); });
}

double median_ise(Setting s, std::size_t n, Design d) { return median(ise_reps(s, n, d)); }

// 4. Wasserstein ISE decreases in n; dense no worse than sparse at n = 400.
Outcome ise_shape() {
  bool pass = true;
  std::string detail;
  for (auto s : {Setting::I, Setting::II, Setting::III, Setting::IV}) {
    const double m50 = median_ise(s, 50, Design::sparse);
    const auto sparse400 = ise_reps(s, 400, Design::sparse);
    const auto dense400 = ise_reps(s, 400, Design::dense);
    const double m400 = median(sparse400);
    const double m1000 = median_ise(s, 1000, Design::sparse);
    const double d400 = median(dense400);
    // Same seeds share covariates and endpoints, so the replicates pair up.
    double diff = 0.0;
    for (std::size_t r = 0; r < dense400.size(); ++r)
      diff += (dense400[r] - sparse400[r]) / static_cast<double>(dense400.size());
    const bool order = m1000 < m400 && m400 < m50;
    const bool dense = d400 <= m400;
    pass &= order && dense;
    detail += std::string(to_string(s)) + ": " + num(m50) + " > " + num(m400) + " > " + num(m1000) +
              (order ? "" : " [order violated]") + ", dense400 " + num(d400) +
              (dense ? "" : " [dense > sparse]") + " (paired mean dense-sparse " + num(diff, 2) + "); ";
  }
  return {pass, detail};
}

// 5. Location of the fitted start distribution moves with z only where the setting says so.
Outcome setting_semantics() {
  bool pass = true;
  std::string detail = "mean slope of zeta0 location on z:";
  for (auto s : {Setting::I, Setting::II, Setting::III}) {
    const auto slopes = replicates(20, [&](std::uint64_t seed) {
      const auto cfg = config(s, 500, Design::sparse, 0.1, seed);
      const auto ds = generate_dataset(cfg);
      const auto model = fit_two_step(ds.subjects);
      const auto q0 = base_quantile(ds.kind);
      double lo = INFINITY, hi = -INFINITY;
      for (const auto& subj : ds.subjects) {
        lo = std::min(lo, subj.z(0));
        hi = std::max(hi, subj.z(0));
      }
      const auto grid = make_eval_grid(lo, hi);
      std::vector<double> loc;
      for (double z : grid.z_grid) {
        const auto zeta0 = predict_endpoints(model, scalar(z)).p0;
        loc.push_back(location_scale_fit(zeta0.payload(), q0).location);
      }
      return ols_slope(grid.z_grid, loc);
    });
    double mean = 0.0;
    for (double v : slopes) mean += v / static_cast<double>(slopes.size());
    const bool ok = s == Setting::II ? std::abs(mean) < 0.05 : std::abs(mean - 0.3) <= 0.05;
    pass &= ok;
    detail += std::string(" ") + std::string(to_string(s)) + " " + num(mean) + (ok ? "" : " [out of range]");
  }
  return {pass, detail + " (I/III: 0.3 +- 0.05, II: |slope| < 0.05)"};
}

// 6. Sphere ISE decreases in n for both designs.
Outcome sphere_ise() {
  bool pass = true;
  std::string detail;
  for (auto d : {Design::sparse, Design::dense}) {
    const double m50 = median_ise(Setting::Sphere, 50, d);
    const double m400 = median_ise(Setting::Sphere, 400, d);
    const double m1000 = median_ise(Setting::Sphere, 1000, d);
    const bool ok = m1000 < m400 && m400 < m50;
    pass &= ok;
    detail += std::string(to_string(d)) + ": " + num(m50) + " > " + num(m400) + " > " + num(m1000) +
              (ok ? "" : " [order violated]") + "; ";
  }
  return {pass, detail};
}

Outcome unit_suite(const std::string& binary, const std::string& filter) {
  if (binary.empty() || !fs::exists(binary)) return {false, "unit test binary not found: '" + binary + "'"};
  const std::string cmd = "\"" + binary + "\" --gtest_brief=1 \"--gtest_filter=" + filter + "\" > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return {rc == 0, "gtest filter " + filter + (rc == 0 ? " all passed" : " had failures (rerun the unit binary)")};
}

struct TempDir {
  TempDir() : path(fs::temp_directory_path() / ("geomix_acceptance_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
  fs::path path;
};

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "geomix");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

// 9. Byte-identical reruns and thread-count independence.
Outcome determinism() {
  TempDir dir;
  bool pass = true;
  std::string detail;
  for (const std::string setting : {"IV", "SPHERE"}) {
    const auto a = dir / ("a_" + setting + ".json"), b = dir / ("b_" + setting + ".json");
    const std::vector<std::string> base{"simulate", "--setting", setting, "--n", "200", "--design",
                                        "sparse", "--alpha", "0.1", "--seed", "7", "--out"};
    auto args_a = base, args_b = base;
    args_a.push_back(a);
    args_b.push_back(b);
    const bool same = cli(args_a) == 0 && cli(args_b) == 0 && read_text(a) == read_text(b);
    pass &= same;
    detail += "simulate " + setting + (same ? " identical; " : " DIFFERS; ");
  }
  for (const std::string setting : {"III", "SPHERE"}) {
    const auto one = dir / ("mc1_" + setting + ".csv"), four = dir / ("mc4_" + setting + ".csv");
    const std::vector<std::string> base{"mc", "--setting", setting, "--reps", "6", "--n-list", "40,120",
                                        "--seed", "5", "--out"};
    auto a1 = base, a4 = base;
    a1.insert(a1.end(), {one, "--threads", "1"});
    a4.insert(a4.end(), {four, "--threads", "4"});
    const bool same = cli(a1) == 0 && cli(a4) == 0 && read_text(one) == read_text(four);
    pass &= same;
    detail += "mc " + setting + " threads 4 vs 1" + (same ? " identical; " : " DIFFER; ");
  }
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string unit_binary = argc > 1 ? argv[1] : "";
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<Criterion> criteria{
      {1, "exact geodesic recovery from noise-free subjects", 10, geodesic_recovery},
      {2, "root-n rate of the two-step estimator", 300, root_n_rate},
      {3, "estimation error decreases with the perturbation level", 300, perturbation_levels},
      {4, "Wasserstein ISE decreases in n, dense <= sparse", 900, ise_shape},
      {5, "setting semantics of the fitted location", 300, setting_semantics},
      {6, "sphere ISE decreases in n", 600, sphere_ise},
      {7, "exact-value unit suite", 5, [&] { return unit_suite(unit_binary, "-*Property*"); }},
      {8, "invariant suites", 60, [&] { return unit_suite(unit_binary, "*Property*"); }},
      {9, "determinism of simulate and mc", 120, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " | "
              << o.detail << " | " << num(secs, 3) << " s (limit " << c.budget_s << " s)"
              << (in_time ? "" : " [too slow]") << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
