#include "webscatter/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace webscatter {

using nlohmann::json;

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path().empty()
                           ? fs::path(target.string() + ".tmp")
                           : target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw InputError("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw InputError("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw InputError("missing field '" + std::string(key) + "' at " + where);
  return *it;
}

json cplx_to_json(cplx z) { return json::array({std::real(z), std::imag(z)}); }
cplx cplx_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

WebSystem load_system(const std::string& path) {
  const json j = parse_file(path);
  try {
    const json& c = field(j, "central", "/");
    const int m = field(c, "size", "/central").get<int>();
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(m, m);
    for (const auto& e : field(c, "entries", "/central")) {
      const int r = e.at(0).get<int>(), col = e.at(1).get<int>();
      const double v = e.at(2).get<double>();
      if (r < 0 || r >= m || col < 0 || col >= m)
        throw InputError("entry index out of range at /central/entries");
      mat(r, col) = v;
      mat(col, r) = v;
    }
    std::vector<ChannelSpec> channels;
    std::vector<int> attach;
    for (const auto& jc : field(j, "channels", "/")) {
      ChannelSpec ch;
      ch.id = field(jc, "id", "/channels").get<std::string>();
      ch.limit_a = field(jc, "a", "/channels").get<double>();
      ch.limit_b = field(jc, "b", "/channels").get<double>();
      ch.coupling_b0 = field(jc, "b0", "/channels").get<double>();
      ch.support = field(jc, "support", "/channels").get<int>();
      ch.diag.assign(ch.support, ch.limit_a);
      ch.hop.assign(ch.support, ch.limit_b);
      if (jc.contains("diag"))
        for (const auto& kv : jc["diag"]) {
          const int k = kv.at(0).get<int>();
          if (k < 1 || k > ch.support)
            throw InputError("diag index outside 1..support in channel " +
                             ch.id);
          ch.diag[k - 1] = kv.at(1).get<double>();
        }
      if (jc.contains("hop"))
        for (const auto& kv : jc["hop"]) {
          const int k = kv.at(0).get<int>();
          if (k < 1 || k > ch.support)
            throw InputError("hop index outside 1..support in channel " +
                             ch.id);
          ch.hop[k - 1] = kv.at(1).get<double>();
        }
      attach.push_back(field(jc, "attach", "/channels").get<int>());
      channels.push_back(std::move(ch));
    }
    return WebSystem(CentralBlock{std::move(mat)}, std::move(channels),
                     std::move(attach));
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
}

void save_system(const WebSystem& sys, const std::string& path) {
  json j;
  j["central"]["size"] = sys.center_size();
  json entries = json::array();
  for (int r = 0; r < sys.center_size(); ++r)
    for (int c = r; c < sys.center_size(); ++c)
      if (sys.central().matrix(r, c) != 0.0)
        entries.push_back({r, c, sys.central().matrix(r, c)});
  j["central"]["entries"] = std::move(entries);
  j["channels"] = json::array();
  for (int s = 0; s < sys.channel_count(); ++s) {
    const ChannelSpec& ch = sys.channel(s);
    json jc;
    jc["id"] = ch.id;
    jc["a"] = ch.limit_a;
    jc["b"] = ch.limit_b;
    jc["b0"] = ch.coupling_b0;
    jc["attach"] = sys.attachment(s);
    jc["support"] = ch.support;
    json d = json::array(), h = json::array();
    for (int k = 1; k <= ch.support; ++k) {
      d.push_back({k, ch.diag[k - 1]});
      h.push_back({k, ch.hop[k - 1]});
    }
    jc["diag"] = std::move(d);
    jc["hop"] = std::move(h);
    j["channels"].push_back(std::move(jc));
  }
  atomic_write(path, j.dump(2) + "\n");
}

SpectralDataset load_dataset(const std::string& path) {
  const json j = parse_file(path);
  try {
    SpectralDataset d;
    const json& ch = field(j, "chart", "/");
    d.a = field(ch, "a", "/chart").get<double>();
    d.b = field(ch, "b", "/chart").get<double>();
    d.nodes_per_segment =
        field(ch, "nodes_per_segment", "/chart").get<int>();
    for (const auto& jc : field(j, "channels", "/")) {
      SpectralDataset::Channel c;
      c.id = field(jc, "id", "/channels").get<std::string>();
      c.limit_a = field(jc, "a", "/channels").get<double>();
      c.limit_b = field(jc, "b", "/channels").get<double>();
      c.flagged = jc.value("flagged", 0);
      for (const auto& row : field(jc, "s_diag", "/channels"))
        c.s_diag.emplace_back(row.at(2).get<double>(), row.at(3).get<double>());
      d.channels.push_back(std::move(c));
    }
    const int n = d.channel_count();
    d.closed_nodes.assign(n, {});
    d.closed_weights.assign(n, {});
    d.cross_mag.assign(n, std::vector<std::vector<double>>(n));
    for (const auto& cm : j.value("cross_mag", json::array())) {
      const int s = field(cm, "sigma", "/cross_mag").get<int>();
      const int v = field(cm, "nu", "/cross_mag").get<int>();
      std::vector<double> nodes, mags, weights;
      for (const auto& row : field(cm, "samples", "/cross_mag")) {
        nodes.push_back(row.at(0).get<double>());
        mags.push_back(row.at(1).get<double>());
        // Third column: quadrature weight. Absent in older files, where the
        // layout is replayed from the chart and nodes_per_segment instead.
        if (row.size() >= 3) weights.push_back(row.at(2).get<double>());
      }
      if (!weights.empty() && weights.size() != nodes.size())
        throw InputError("samples mix weighted and unweighted rows for sigma=" +
                         std::to_string(s));
      if (d.closed_nodes[s].empty()) {
        d.closed_nodes[s] = nodes;
        d.closed_weights[s] = weights;
      } else if (d.closed_nodes[s] != nodes ||
                 d.closed_weights[s] != weights) {
        throw InputError("inconsistent node lists in /cross_mag for sigma=" +
                         std::to_string(s));
      }
      d.cross_mag[s][v] = std::move(mags);
    }
    for (const auto& lv : j.value("levels", json::array())) {
      SpectralDataset::Level l;
      l.omega_hat = cplx_from_json(field(lv, "omega_hat", "/levels"));
      for (const auto& t : field(lv, "theta", "/levels"))
        l.theta.push_back(cplx_from_json(t));
      for (const auto& t : field(lv, "dtheta", "/levels"))
        l.dtheta.push_back(cplx_from_json(t));
      for (const auto& t : field(lv, "M_diag", "/levels"))
        l.m_diag.push_back(cplx_from_json(t));
      d.levels.push_back(std::move(l));
    }
    return d;
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void save_dataset(const SpectralDataset& d, const std::string& path) {
  json j;
  j["chart"]["a"] = d.a;
  j["chart"]["b"] = d.b;
  j["chart"]["nodes_per_segment"] = d.nodes_per_segment;
  j["channels"] = json::array();
  const int n = d.channel_count();
  for (int s = 0; s < n; ++s) {
    const auto& c = d.channels[s];
    json jc;
    jc["id"] = c.id;
    jc["a"] = c.limit_a;
    jc["b"] = c.limit_b;
    jc["flagged"] = c.flagged;
    json rows = json::array();
    const int ng = static_cast<int>(c.s_diag.size());
    for (int i = 0; i < ng; ++i) {
      const cplx th = std::polar(1.0, 2.0 * kPi * (i + 0.5) / ng);
      rows.push_back({std::real(th), std::imag(th), std::real(c.s_diag[i]),
                      std::imag(c.s_diag[i])});
    }
    jc["s_diag"] = std::move(rows);
    j["channels"].push_back(std::move(jc));
  }
  j["cross_mag"] = json::array();
  for (int s = 0; s < n; ++s)
    for (int v = 0; v < n; ++v) {
      if (d.cross_mag[s][v].empty()) continue;
      json cm;
      cm["sigma"] = s;
      cm["nu"] = v;
      json rows = json::array();
      const bool weighted = s < static_cast<int>(d.closed_weights.size()) &&
                            d.closed_weights[s].size() ==
                                d.closed_nodes[s].size();
      for (std::size_t i = 0; i < d.closed_nodes[s].size(); ++i) {
        if (weighted)
          rows.push_back({d.closed_nodes[s][i], d.cross_mag[s][v][i],
                          d.closed_weights[s][i]});
        else
          rows.push_back({d.closed_nodes[s][i], d.cross_mag[s][v][i]});
      }
      cm["samples"] = std::move(rows);
      j["cross_mag"].push_back(std::move(cm));
    }
  j["levels"] = json::array();
  for (const auto& lv : d.levels) {
    json l;
    l["omega_hat"] = cplx_to_json(lv.omega_hat);
    l["theta"] = json::array();
    l["dtheta"] = json::array();
    for (cplx t : lv.theta) l["theta"].push_back(cplx_to_json(t));
    for (cplx t : lv.dtheta) l["dtheta"].push_back(cplx_to_json(t));
    l["M_diag"] = json::array();
    for (cplx t : lv.m_diag) l["M_diag"].push_back(cplx_to_json(t));
    j["levels"].push_back(std::move(l));
  }
  atomic_write(path, j.dump(2) + "\n");
}

std::string chart_to_json(const SpectralChart& chart) {
  json j;
  j["band"] = {chart.a() - 2 * chart.b(), chart.a() + 2 * chart.b()};
  j["a"] = chart.a();
  j["b"] = chart.b();
  j["channels"] = json::array();
  for (int s = 0; s < chart.channels(); ++s) {
    json jc;
    jc["a"] = chart.limit_a(s);
    jc["b"] = chart.limit_b(s);
    json arcs = json::array();
    for (auto [lo, hi] : chart.open_arcs(s)) arcs.push_back({lo, hi});
    jc["open_arcs"] = std::move(arcs);
    json segs = json::array();
    for (const Segment& g : chart.segments(s)) segs.push_back({g.lo, g.hi});
    jc["segments"] = std::move(segs);
    j["channels"].push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

}  // namespace webscatter
