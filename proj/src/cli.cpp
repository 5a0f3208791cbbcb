#include "geomix/cli.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geomix/error.hpp"
#include "geomix/evaluation.hpp"
#include "geomix/io.hpp"
#include "geomix/mixed_effects.hpp"
#include "geomix/random.hpp"
#include "geomix/simulation.hpp"

namespace geomix {

namespace {

// Raised for flag values that parse but make no sense (mapped to exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest representation that parses back to the same double.
std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <typename T>
std::vector<T> parse_list(const std::string& csv, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw UsageError(std::string(flag) + ": empty list entry");
    std::size_t used = 0;
    T v{};
    try {
      if constexpr (std::is_same_v<T, double>)
        v = std::stod(item, &used);
      else
        v = static_cast<T>(std::stoull(item, &used));
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": cannot parse '" + item + "'");
    }
    if (used != item.size()) throw UsageError(std::string(flag) + ": cannot parse '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

struct SimulateOpts {
  std::string setting, design = "sparse", out;
  std::size_t n = 0, grid_size = 100;
  double alpha = 0.1;
  std::uint64_t seed = 0;
  bool fixed_endpoints = false;
};

SimulationConfig make_config(const std::string& setting, std::size_t n, const std::string& design,
                             double alpha, std::uint64_t seed, std::size_t grid_size,
                             bool fixed_endpoints) {
  SimulationConfig cfg;
  try {
    cfg.setting = parse_setting(setting);
    cfg.design = parse_design(design);
  } catch (const StructuralError& e) {
    throw UsageError(e.what());
  }
  cfg.n = n;
  cfg.alpha = alpha;
  cfg.seed = seed;
  cfg.grid_size = grid_size;
  cfg.random_effects = !fixed_endpoints;
  try {
    check_config(cfg);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void cmd_simulate(const SimulateOpts& o) {
  const auto cfg = make_config(o.setting, o.n, o.design, o.alpha, o.seed, o.grid_size, o.fixed_endpoints);
  save_dataset(generate_dataset(cfg), o.out);
}

void cmd_fit(const std::string& data, const std::string& out, std::optional<unsigned> threads) {
  const Dataset ds = load_dataset(data);
  save_fit(fit_two_step(ds.subjects, threads.value_or(threads_from_env())), out);
}

void cmd_predict(const std::string& fit, const std::string& z_csv, double t,
                 const std::optional<std::string>& out_path, std::ostream& out) {
  const auto zs = parse_list<double>(z_csv, "--z");
  const auto model = load_fit(fit);
  if (static_cast<Eigen::Index>(zs.size()) != model.z_stats.mean.size())
    throw UsageError("--z has " + std::to_string(zs.size()) + " entries, the fit expects " +
                     std::to_string(model.z_stats.mean.size()));
  const Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(zs.data(), static_cast<Eigen::Index>(zs.size()));
  const auto y = predict_trajectory(predict_endpoints(model, z), t);
  const std::string line = dump_prediction(y, t, z) + "\n";
  if (out_path)
    write_text(*out_path, line);
  else
    out << line;
}

void cmd_ise(const std::string& data, const std::string& fit, bool squared, const std::string& out) {
  const Dataset ds = load_dataset(data);
  const auto model = load_fit(fit);
  if (!(model.kind == ds.kind)) throw StructuralError("fit and dataset live in different spaces");
  const double v = model_ise(model, ds, squared);
  write_text(out, std::string("ise,squared\n") + fmt(v) + "," + (squared ? "true" : "false") + "\n");
}

void cmd_rmpe(const std::string& train_path, const std::string& test_path, std::size_t splits,
              std::uint64_t seed, const std::string& out) {
  const Dataset train = load_dataset(train_path);
  const Dataset test = load_dataset(test_path);
  if (!(train.kind == test.kind)) throw StructuralError("train and test sets live in different spaces");
  const unsigned threads = threads_from_env();
  std::vector<double> values;
  if (splits == 0) {
    values.push_back(rmpe(fit_two_step(train.subjects, threads), test.subjects));
  } else {
    std::vector<SubjectRecord> pool = train.subjects;
    pool.insert(pool.end(), test.subjects.begin(), test.subjects.end());
    const std::size_t n_test = test.subjects.size();
    for (std::size_t s = 0; s < splits; ++s) {
      Philox rng(seed, s);
      std::vector<std::size_t> idx(pool.size());
      std::iota(idx.begin(), idx.end(), 0);
      for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)))]);
      std::vector<SubjectRecord> tr, te;
      for (std::size_t i = 0; i < idx.size(); ++i) (i < n_test ? te : tr).push_back(pool[idx[i]]);
      values.push_back(rmpe(fit_two_step(tr, threads), te));
    }
  }
  const Summary s = summarize(values);
  write_text(out, "n_train,n_test,first_quartile,mean,median,third_quartile\n" +
                      std::to_string(train.subjects.size()) + "," + std::to_string(test.subjects.size()) +
                      "," + fmt(s.first_quartile) + "," + fmt(s.mean) + "," + fmt(s.median) + "," +
                      fmt(s.third_quartile) + "\n");
}

struct McOpts {
  std::string setting, design = "sparse", n_list, out;
  std::size_t reps = 0, grid_size = 100;
  double alpha = 0.1;
  std::uint64_t seed = 1;
  bool squared = false;
  bool fixed_endpoints = false;
  std::optional<unsigned> threads;
};

void cmd_mc(const McOpts& o) {
  const auto ns = parse_list<std::size_t>(o.n_list, "--n-list");
  if (o.reps == 0) throw UsageError("--reps must be positive");
  std::vector<SimulationConfig> jobs;
  for (std::size_t n : ns)
    for (std::size_t r = 0; r < o.reps; ++r)
      jobs.push_back(make_config(o.setting, n, o.design, o.alpha, o.seed + r, o.grid_size, o.fixed_endpoints));
  std::vector<double> ise(jobs.size());
  parallel_for(jobs.size(), o.threads.value_or(threads_from_env()),
               [&](std::size_t k) { ise[k] = replicate_ise(jobs[k], o.squared, 1); });
  std::string csv = "run_id,setting,n,design,alpha,ise\n";
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto& c = jobs[k];
    csv += std::to_string(k) + "," + std::string(to_string(c.setting)) + "," + std::to_string(c.n) + "," +
           std::string(to_string(c.design)) + "," + fmt(c.alpha) + "," + fmt(ise[k]) + "\n";
  }
  write_text(o.out, csv);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geodesic mixed-effects regression for longitudinal random objects", "geomix"};
  app.require_subcommand(1);

  SimulateOpts sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
  simulate->add_option("--setting", sim.setting, "I, II, III, IV or SPHERE")->required();
  simulate->add_option("--n", sim.n, "Number of subjects")->required();
  simulate->add_option("--design", sim.design, "sparse or dense")->required();
  simulate->add_option("--alpha", sim.alpha, "Perturbation level (0 disables it)")->required();
  simulate->add_option("--seed", sim.seed, "RNG seed")->required();
  simulate->add_option("--out", sim.out, "Output dataset path")->required();
  simulate->add_option("--grid-size", sim.grid_size, "Quantile grid size");
  simulate->add_flag("--fixed-endpoints", sim.fixed_endpoints,
                     "Endpoints equal their conditional Frechet means (no random effect)");

  std::string data, fit_out;
  std::optional<unsigned> fit_threads;
  auto* fit = app.add_subcommand("fit", "Two-step fit of a dataset");
  fit->add_option("--data", data, "Dataset path")->required();
  fit->add_option("--out", fit_out, "Output fit path")->required();
  fit->add_option("--threads", fit_threads, "Worker threads (default GEOMIX_THREADS or 1)");

  std::string fit_path, z_csv;
  double t = 0.0;
  std::optional<std::string> pred_out;
  auto* predict = app.add_subcommand("predict", "Predict the object at (t, z)");
  predict->add_option("--fit", fit_path, "Fit path")->required();
  predict->add_option("--z", z_csv, "Covariate values, comma separated")->required();
  predict->add_option("--t", t, "Time in [0,1]")->required();
  predict->add_option("--out", pred_out, "Write the JSON line here instead of stdout");

  auto* evaluate = app.add_subcommand("evaluate", "Evaluation metrics");
  evaluate->require_subcommand(1);
  std::string ise_data, ise_fit, ise_out;
  bool squared = false;
  auto* ise_cmd = evaluate->add_subcommand("ise", "Integrated error against the generating model");
  ise_cmd->add_option("--data", ise_data, "Simulated dataset path")->required();
  ise_cmd->add_option("--fit", ise_fit, "Fit path")->required();
  ise_cmd->add_flag("--squared", squared, "Integrate squared distances");
  ise_cmd->add_option("--out", ise_out, "Output CSV path")->required();

  std::string train, test, rmpe_out;
  std::size_t splits = 0;
  std::uint64_t split_seed = 1;
  auto* rmpe_cmd = evaluate->add_subcommand("rmpe", "Root mean squared prediction error");
  rmpe_cmd->add_option("--train", train, "Training dataset path")->required();
  rmpe_cmd->add_option("--test", test, "Test dataset path")->required();
  rmpe_cmd->add_option("--out", rmpe_out, "Output CSV path")->required();
  rmpe_cmd->add_option("--splits", splits, "Pool both sets and re-split this many times");
  rmpe_cmd->add_option("--seed", split_seed, "Seed for --splits");

  McOpts mc;
  auto* mc_cmd = app.add_subcommand("mc", "Monte-Carlo ISE study");
  mc_cmd->add_option("--setting", mc.setting, "I, II, III, IV or SPHERE")->required();
  mc_cmd->add_option("--reps", mc.reps, "Replicates per sample size")->required();
  mc_cmd->add_option("--n-list", mc.n_list, "Sample sizes, comma separated")->required();
  mc_cmd->add_option("--out", mc.out, "Output CSV path")->required();
  mc_cmd->add_option("--design", mc.design, "sparse or dense");
  mc_cmd->add_option("--alpha", mc.alpha, "Perturbation level");
  mc_cmd->add_option("--seed", mc.seed, "Base seed; replicate r uses seed + r");
  mc_cmd->add_option("--grid-size", mc.grid_size, "Quantile grid size");
  mc_cmd->add_flag("--squared", mc.squared, "Integrate squared distances");
  mc_cmd->add_flag("--fixed-endpoints", mc.fixed_endpoints, "No random effect in the endpoints");
  mc_cmd->add_option("--threads", mc.threads, "Worker threads (default GEOMIX_THREADS or 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      cmd_simulate(sim);
    } else if (fit->parsed()) {
      cmd_fit(data, fit_out, fit_threads);
    } else if (predict->parsed()) {
      cmd_predict(fit_path, z_csv, t, pred_out, out);
    } else if (ise_cmd->parsed()) {
      cmd_ise(ise_data, ise_fit, squared, ise_out);
    } else if (rmpe_cmd->parsed()) {
      cmd_rmpe(train, test, splits, split_seed, rmpe_out);
    } else if (mc_cmd->parsed()) {
      cmd_mc(mc);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace geomix
