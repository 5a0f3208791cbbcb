#include "geomix/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "geomix/error.hpp"

namespace geomix {

using nlohmann::json;

namespace {

json space_params(const SpaceKind& kind) {
  switch (kind.tag()) {
    case SpaceTag::euclidean1d: return json::object();
    case SpaceTag::wasserstein1d:
      return {{"grid", kind.grid().levels}, {"support", {kind.grid().lo, kind.grid().hi}}};
    case SpaceTag::spd: return {{"dim", kind.dim()}, {"alpha", kind.power()}};
    case SpaceTag::sphere: return {{"ambient", 3}};
  }
  return json::object();
}

SpaceKind read_space(const json& doc) {
  const SpaceTag tag = parse_space_tag(doc.at("space").get<std::string>());
  const json params = doc.value("space_params", json::object());
  switch (tag) {
    case SpaceTag::euclidean1d: return SpaceKind::euclidean1d();
    case SpaceTag::wasserstein1d: {
      const auto support = params.at("support").get<std::vector<double>>();
      if (support.size() != 2) throw FormatError("space_params.support must have two entries");
      return SpaceKind::wasserstein(params.at("grid").get<std::vector<double>>(), support[0],
                                    support[1]);
    }
    case SpaceTag::spd: return SpaceKind::spd(params.at("dim").get<int>(), params.at("alpha").get<double>());
    case SpaceTag::sphere:
      if (params.value("ambient", 3) != 3) throw FormatError("only the 2-sphere in R^3 is supported");
      return SpaceKind::sphere();
  }
  throw FormatError("unknown space");
}

void check_version(const json& doc) {
  if (!doc.is_object()) throw FormatError("document is not a JSON object");
  if (!doc.contains("schema_version")) throw FormatError("missing schema_version");
  const int v = doc.at("schema_version").get<int>();
  if (v != kSchemaVersion)
    throw FormatError("schema_version " + std::to_string(v) + " is not supported (expected " +
                      std::to_string(kSchemaVersion) + ")");
}

ObjectPoint read_point(const SpaceKind& kind, const json& y, const std::string& where) {
  std::vector<double> payload;
  try {
    payload = y.get<std::vector<double>>();
  } catch (const json::exception&) {
    throw FormatError(where + ": payload is not an array of numbers");
  }
  if (payload.size() != kind.payload_size())
    throw FormatError(where + ": payload has length " + std::to_string(payload.size()) +
                      ", space expects " + std::to_string(kind.payload_size()));
  ObjectPoint p(kind, std::move(payload));
  if (!validate(p)) throw FormatError(where + ": point is not a valid element of the space");
  return p;
}

Eigen::VectorXd read_vector(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

json config_json(const SimulationConfig& c) {
  return {{"setting", std::string(to_string(c.setting))},
          {"n", c.n},
          {"design", std::string(to_string(c.design))},
          {"alpha", c.alpha},
          {"seed", c.seed},
          {"grid_size", c.grid_size},
          {"random_effects", c.random_effects},
          {"mu0", c.mu0},
          {"sigma0", c.sigma0},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"gamma", c.gamma},
          {"nu1", c.nu1},
          {"nu2", c.nu2},
          {"sphere_sigma2", c.sphere_sigma2}};
}

SimulationConfig config_from_json(const json& j) {
  SimulationConfig c;
  c.setting = parse_setting(j.at("setting").get<std::string>());
  c.n = j.at("n").get<std::size_t>();
  c.design = parse_design(j.at("design").get<std::string>());
  c.alpha = j.at("alpha").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.grid_size = j.value("grid_size", c.grid_size);
  c.random_effects = j.value("random_effects", c.random_effects);
  c.mu0 = j.value("mu0", c.mu0);
  c.sigma0 = j.value("sigma0", c.sigma0);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.gamma = j.value("gamma", c.gamma);
  c.nu1 = j.value("nu1", c.nu1);
  c.nu2 = j.value("nu2", c.nu2);
  c.sphere_sigma2 = j.value("sphere_sigma2", c.sphere_sigma2);
  return c;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("JSON parse error: ") + e.what());
  }
}

}  // namespace

std::string dump_dataset(const Dataset& ds) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["space"] = std::string(to_string(ds.kind.tag()));
  doc["space_params"] = space_params(ds.kind);
  json subjects = json::array();
  for (const auto& s : ds.subjects) {
    json obs = json::array();
    for (std::size_t j = 0; j < s.obs.size(); ++j)
      obs.push_back({{"t", s.times[j]}, {"y", s.obs[j].payload()}});
    subjects.push_back({{"id", s.id}, {"z", to_std(s.z)}, {"obs", std::move(obs)}});
  }
  doc["subjects"] = std::move(subjects);
  if (!ds.truth.empty()) {
    json truth = json::array();
    for (std::size_t i = 0; i < ds.truth.size(); ++i)
      truth.push_back({{"id", ds.subjects.at(i).id},
                       {"p0", ds.truth[i].p0.payload()},
                       {"p1", ds.truth[i].p1.payload()}});
    doc["truth"] = std::move(truth);
  }
  if (ds.simulation) doc["simulation"] = config_json(*ds.simulation);
  return doc.dump(1) + "\n";
}

Dataset parse_dataset(const std::string& text) {
  const json doc = parse_json(text);
  try {
    check_version(doc);
    const SpaceKind kind = read_space(doc);
    Dataset ds{kind, {}, {}, std::nullopt};
    const auto& subjects = doc.at("subjects");
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      const auto& s = subjects[i];
      SubjectRecord rec;
      rec.id = s.at("id").get<std::string>();
      const std::string where = "subject '" + rec.id + "' (index " + std::to_string(i) + ")";
      rec.z = read_vector(s.at("z"));
      const auto& obs = s.at("obs");
      if (obs.empty()) throw FormatError(where + " has no observations");
      for (std::size_t j = 0; j < obs.size(); ++j) {
        const std::string at = where + ", observation " + std::to_string(j);
        const double t = obs[j].at("t").get<double>();
        if (!(t >= 0.0 && t <= 1.0)) throw FormatError(at + ": time outside [0,1]");
        rec.times.push_back(t);
        rec.obs.push_back(read_point(kind, obs[j].at("y"), at));
      }
      if (!ds.subjects.empty() && ds.subjects.front().z.size() != rec.z.size())
        throw FormatError(where + ": covariate dimension differs from the first subject");
      ds.subjects.push_back(std::move(rec));
    }
    if (doc.contains("truth")) {
      const auto& truth = doc.at("truth");
      if (truth.size() != ds.subjects.size())
        throw FormatError("truth has " + std::to_string(truth.size()) + " entries for " +
                          std::to_string(ds.subjects.size()) + " subjects");
      for (std::size_t i = 0; i < truth.size(); ++i) {
        const std::string where = "truth entry " + std::to_string(i);
        if (truth[i].at("id").get<std::string>() != ds.subjects[i].id)
          throw FormatError(where + ": id does not match subject " + ds.subjects[i].id);
        ds.truth.emplace_back(read_point(kind, truth[i].at("p0"), where),
                              read_point(kind, truth[i].at("p1"), where));
      }
    }
    if (doc.contains("simulation")) ds.simulation = config_from_json(doc.at("simulation"));
    return ds;
  } catch (const json::exception& e) {
    throw FormatError(std::string("dataset schema error: ") + e.what());
  }
}

std::string dump_fit(const FixedEffectsModel& model) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["space"] = std::string(to_string(model.kind.tag()));
  doc["space_params"] = space_params(model.kind);
  json cov = json::array();
  for (Eigen::Index r = 0; r < model.z_stats.cov.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < model.z_stats.cov.cols(); ++c) row.push_back(model.z_stats.cov(r, c));
    cov.push_back(std::move(row));
  }
  doc["z_stats"] = {{"mean", to_std(model.z_stats.mean)}, {"cov", std::move(cov)}};
  json ends = json::array();
  for (std::size_t i = 0; i < model.ids.size(); ++i) {
    const Eigen::VectorXd z = model.Z.row(static_cast<Eigen::Index>(i)).transpose();
    ends.push_back({{"id", model.ids[i]},
                    {"z", to_std(z)},
                    {"p0", model.start[i].payload()},
                    {"p1", model.end[i].payload()}});
  }
  doc["subject_endpoints"] = std::move(ends);
  return doc.dump(1) + "\n";
}

FixedEffectsModel parse_fit(const std::string& text) {
  const json doc = parse_json(text);
  try {
    check_version(doc);
    const SpaceKind kind = read_space(doc);
    const Eigen::VectorXd mean = read_vector(doc.at("z_stats").at("mean"));
    const auto rows = doc.at("z_stats").at("cov").get<std::vector<std::vector<double>>>();
    const auto p = mean.size();
    if (static_cast<Eigen::Index>(rows.size()) != p) throw FormatError("z_stats.cov has the wrong shape");
    Eigen::MatrixXd cov(p, p);
    for (Eigen::Index r = 0; r < p; ++r) {
      if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != p)
        throw FormatError("z_stats.cov has the wrong shape");
      for (Eigen::Index c = 0; c < p; ++c) cov(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    const auto& ends = doc.at("subject_endpoints");
    if (ends.size() < 2) throw FormatError("fit needs at least two subject endpoints");
    FixedEffectsModel model{kind, Eigen::MatrixXd(static_cast<Eigen::Index>(ends.size()), p),
                            predictor_stats_from(mean, cov), {}, {}, {}};
    for (std::size_t i = 0; i < ends.size(); ++i) {
      const auto& e = ends[i];
      const std::string id = e.at("id").get<std::string>();
      const std::string where = "subject '" + id + "' (index " + std::to_string(i) + ")";
      const Eigen::VectorXd z = read_vector(e.at("z"));
      if (z.size() != p) throw FormatError(where + ": covariate dimension differs from z_stats");
      model.Z.row(static_cast<Eigen::Index>(i)) = z.transpose();
      model.ids.push_back(id);
      model.start.push_back(read_point(kind, e.at("p0"), where + " p0"));
      model.end.push_back(read_point(kind, e.at("p1"), where + " p1"));
    }
    return model;
  } catch (const json::exception& e) {
    throw FormatError(std::string("fit schema error: ") + e.what());
  }
}

std::string dump_prediction(const ObjectPoint& y, double t, const Eigen::VectorXd& z) {
  json doc = {{"space", std::string(to_string(y.tag()))}, {"t", t}, {"z", to_std(z)}, {"y", y.payload()}};
  return doc.dump();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw FormatError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset load_dataset(const std::string& path) { return parse_dataset(read_text(path)); }
void save_dataset(const Dataset& ds, const std::string& path) { write_text(path, dump_dataset(ds)); }
FixedEffectsModel load_fit(const std::string& path) { return parse_fit(read_text(path)); }
void save_fit(const FixedEffectsModel& model, const std::string& path) { write_text(path, dump_fit(model)); }

}  // namespace geomix
