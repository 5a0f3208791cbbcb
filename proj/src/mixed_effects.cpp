#include "geomix/mixed_effects.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <optional>
#include <thread>

#include "geomix/error.hpp"

namespace geomix {

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

unsigned threads_from_env() {
  const char* v = std::getenv("GEOMIX_THREADS");
  if (v == nullptr) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 1) return 1;
  return static_cast<unsigned>(std::min(n, 1024L));
}

SubjectFit fit_subject(const SubjectRecord& subject) {
  const std::size_t n = subject.times.size();
  if (n != subject.obs.size())
    throw StructuralError("subject " + subject.id + ": times and observations differ in length");
  if (n < 2)
    throw DegenerateDesignError("subject " + subject.id + " has fewer than two observations",
                                {subject.id});
  const Eigen::MatrixXd T = column(subject.times);
  PredictorStats stats;
  try {
    stats = predictor_stats(T);
  } catch (const DegenerateDesignError&) {
    throw DegenerateDesignError("subject " + subject.id + " has constant observation times",
                                {subject.id});
  }
  const auto w0 = gfr_weights(stats, T, Eigen::VectorXd::Constant(1, 0.0));
  const auto w1 = gfr_weights(stats, T, Eigen::VectorXd::Constant(1, 1.0));
  auto m0 = gfr_fit_info(subject.obs, w0);
  auto m1 = gfr_fit_info(subject.obs, w1);
  return SubjectFit{subject.id, subject.z, GeodesicPair(std::move(m0.point), std::move(m1.point)),
                    m0.info, m1.info};
}

std::vector<SubjectFit> fit_subjects(const std::vector<SubjectRecord>& subjects, unsigned threads) {
  std::vector<std::optional<SubjectFit>> slots(subjects.size());
  std::vector<char> degenerate(subjects.size(), 0);
  parallel_for(subjects.size(), threads, [&](std::size_t i) {
    try {
      slots[i] = fit_subject(subjects[i]);
    } catch (const DegenerateDesignError&) {
      degenerate[i] = 1;
    }
  });
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < subjects.size(); ++i)
    if (degenerate[i]) bad.push_back(subjects[i].id);
  if (!bad.empty()) {
    std::string msg = "degenerate time design (n_i < 2 or constant times) for subject(s):";
    for (const auto& id : bad) msg += " " + id;
    throw DegenerateDesignError(msg, bad);
  }
  std::vector<SubjectFit> out;
  out.reserve(subjects.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

FixedEffectsModel fit_fixed_effects(const std::vector<SubjectFit>& fits) {
  if (fits.size() < 2) throw DegenerateDesignError("fixed effects need at least two subjects");
  const auto p = fits.front().z.size();
  if (p < 1) throw StructuralError("subjects have an empty covariate vector");
  Eigen::MatrixXd Z(static_cast<Eigen::Index>(fits.size()), p);
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (fits[i].z.size() != p)
      throw StructuralError("subject " + fits[i].id + " has a covariate of the wrong dimension");
    require_same_kind(fits.front().endpoints.p0, fits[i].endpoints.p0);
    Z.row(static_cast<Eigen::Index>(i)) = fits[i].z.transpose();
  }
  FixedEffectsModel model{fits.front().endpoints.p0.kind(), Z, predictor_stats(Z), {}, {}, {}};
  for (const auto& f : fits) {
    model.ids.push_back(f.id);
    model.start.push_back(f.endpoints.p0);
    model.end.push_back(f.endpoints.p1);
  }
  return model;
}

GeodesicPair predict_endpoints(const FixedEffectsModel& model, const Eigen::VectorXd& z0) {
  const auto w = gfr_weights(model.z_stats, model.Z, z0);
  return GeodesicPair(gfr_fit(model.start, w), gfr_fit(model.end, w));
}

ObjectPoint predict_trajectory(const GeodesicPair& pair, double t) {
  return geodesic_point(pair.p0, pair.p1, t);
}

FixedEffectsModel fit_two_step(const std::vector<SubjectRecord>& subjects, unsigned threads) {
  return fit_fixed_effects(fit_subjects(subjects, threads));
}

}  // namespace geomix
