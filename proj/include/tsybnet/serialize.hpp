#pragma once

// JSON serialization for networks, fragment sets and distribution specs, plus
// CSV helpers. Network entries are stored as exact dyadic pairs [k, c] so a
// round trip never drifts.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tsybnet/distributions.hpp"
#include "tsybnet/network.hpp"
#include "tsybnet/set_calculus.hpp"

namespace tsybnet {

using Json = nlohmann::json;

inline Json dyadic_json(double v, int c) {
  return Json::array({dyadic_numerator(v, c), c});
}

inline double dyadic_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw error("expected a dyadic pair [k, c]");
  return std::ldexp(static_cast<double>(j[0].get<std::int64_t>()), -j[1].get<int>());
}

inline Json mat_to_json(const Mat& m, int c) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows; ++r) {
    Json row = Json::array();
    for (int k = 0; k < m.cols; ++k) row.push_back(dyadic_json(m.at(r, k), c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Mat mat_from_json(const Json& j) {
  Mat m(static_cast<int>(j.size()), j.empty() ? 0 : static_cast<int>(j[0].size()));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) m.at(r, c) = dyadic_from_json(j[r][c]);
  return m;
}

inline Json network_to_json(const Network& net) {
  Json out;
  out["version"] = 1;
  out["L"] = net.layer_count();
  out["dims"] = net.dims();
  out["grid_c"] = net.grid_c;
  Json layers = Json::array();
  for (const Layer& l : net.hidden) {
    Json jl;
    jl["W"] = mat_to_json(l.W, net.grid_c);
    Json b = Json::array();
    for (double v : l.b) b.push_back(dyadic_json(v, net.grid_c));
    jl["b"] = std::move(b);
    layers.push_back(std::move(jl));
  }
  out["layers"] = std::move(layers);
  out["final_W"] = mat_to_json(net.final_W, net.grid_c);
  return out;
}

inline Network network_from_json(const Json& j) {
  if (j.at("version").get<int>() != 1) throw error("unsupported network format version");
  const int grid_c = j.at("grid_c").get<int>();
  const auto dims = j.at("dims").get<std::vector<int>>();
  std::vector<Layer> layers;
  for (const Json& jl : j.at("layers")) {
    Layer l;
    l.W = mat_from_json(jl.at("W"));
    for (const Json& b : jl.at("b")) l.b.push_back(dyadic_from_json(b));
    layers.push_back(std::move(l));
  }
  Mat final_W = mat_from_json(j.at("final_W"));
  Network net(dims.front(), std::move(layers), std::move(final_W), grid_c);
  if (net.dims() != dims) throw error("network dims do not match serialized layout");
  return net;
}

// ---------------------------------------------------------------------------
// distribution specs
//
// {
//   "d": 2, "beta1": 1.0, "k2": 0.5, "k3": 0.5, "j": 0, "iota": 1,
//   "boundary": {"kind": "pwlinear", "t": [...], "v": [...]}
//             | {"kind": "flat", "level": 0.5}
//             | {"kind": "bumps", "K": 4, "k1": 0.1, "beta2": 1.0, "w": [0,1,...]}
// }

inline Json distribution_spec_json(const Json& boundary, int d, double beta1, double k2,
                                   double k3, int j = 0, int iota = +1) {
  Json out;
  out["d"] = d;
  out["beta1"] = beta1;
  out["k2"] = k2;
  out["k3"] = k3;
  out["j"] = j;
  out["iota"] = iota;
  out["boundary"] = boundary;
  return out;
}

inline TsybakovDistribution distribution_from_json(const Json& j) {
  TsybakovDistribution q;
  q.d = j.at("d").get<int>();
  q.beta1 = j.at("beta1").get<double>();
  q.k2 = j.at("k2").get<double>();
  q.k3 = j.at("k3").get<double>();
  q.j = j.value("j", 0);
  q.iota = j.value("iota", +1);
  q.envelope_beta = q.beta1;
  // C^beta norm of g(t) = max(k2,k3) t^beta1 for integer beta1
  const double k = std::max(q.k2, q.k3);
  if (q.beta1 <= 0.0) {
    q.envelope_B = k;
  } else {
    const int bi = static_cast<int>(std::llround(q.beta1));
    double fact = 1.0, sum = 0.0, run = 1.0;
    for (int i = 0; i <= bi - 1; ++i) {
      sum += run;  // run carries the falling factorial beta!/(beta-i)!
      run *= (bi - i);
    }
    for (int i = 2; i <= bi; ++i) fact *= i;
    q.envelope_B = k * (sum + fact);
  }

  const Json& b = j.at("boundary");
  const std::string kind = b.at("kind").get<std::string>();
  if (kind == "flat") {
    const double level = b.at("level").get<double>();
    q.gamma_low = [level](std::span<const double>) { return level; };
  } else if (kind == "pwlinear") {
    PiecewiseLinear pl;
    pl.t = b.at("t").get<std::vector<double>>();
    pl.v = b.at("v").get<std::vector<double>>();
    pl.validate();
    if (q.d != 2) throw error("piecewise-linear boundaries require d = 2");
    q.gamma_low = [pl](std::span<const double> y) { return pl.eval(y[0]); };
  } else if (kind == "bumps") {
    BumpHypercube hc = bump_hypercube(
        b.at("K").get<int>(), b.at("k1").get<double>(), b.at("beta2").get<double>(), q.d,
        [&] {
          std::vector<std::uint8_t> w;
          for (const Json& e : b.at("w")) w.push_back(e.get<int>() ? 1 : 0);
          return w;
        }());
    q.gamma_low = [hc](std::span<const double> y) { return hc.gamma_w(y); };
    q.gamma_band = [hc](std::span<const double> y) { return hc.gamma_complement(y); };
  } else {
    throw error("unknown boundary kind: " + kind);
  }
  return q;
}

// ---------------------------------------------------------------------------
// boundary fragment sets (serializable boundary kinds: flat, pwlinear)
//
// {"d": 2, "r": 2, "eps2": 1.0, "fragments": [
//    {"j": 0, "iota": 1, "lo": [0,0], "hi": [1,1],
//     "boundary": {"kind": "pwlinear", "t": [...], "v": [...]}}]}

inline BoundaryFn boundary_fn_from_json(const Json& b) {
  const std::string kind = b.at("kind").get<std::string>();
  if (kind == "flat") {
    const double level = b.at("level").get<double>();
    return [level](std::span<const double>) { return level; };
  }
  if (kind == "pwlinear") {
    PiecewiseLinear pl;
    pl.t = b.at("t").get<std::vector<double>>();
    pl.v = b.at("v").get<std::vector<double>>();
    pl.validate();
    return [pl](std::span<const double> y) { return pl.eval(y[0]); };
  }
  throw error("unsupported boundary kind for fragment sets: " + kind);
}

inline BoundaryFragmentSet fragment_set_from_json(const Json& j) {
  BoundaryFragmentSet set;
  set.d = j.at("d").get<int>();
  set.r = j.at("r").get<int>();
  set.eps2 = j.value("eps2", 0.0);
  for (const Json& fj : j.at("fragments")) {
    Fragment f;
    f.j = fj.at("j").get<int>();
    f.iota = fj.at("iota").get<int>();
    f.box.lo = fj.at("lo").get<std::vector<double>>();
    f.box.hi = fj.at("hi").get<std::vector<double>>();
    f.gamma = boundary_fn_from_json(fj.at("boundary"));
    set.fragments.push_back(std::move(f));
  }
  set.validate();
  return set;
}

// ---------------------------------------------------------------------------
// dataset CSV: header x_1,...,x_d,y

inline void dataset_to_csv(const Dataset& data, std::ostream& os) {
  for (int i = 0; i < data.d; ++i) os << "x_" << (i + 1) << ",";
  os << "y\n";
  char buf[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.point(i);
    for (double v : x) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf << ",";
    }
    os << data.labels[i] << "\n";
  }
}

inline Dataset dataset_from_csv(std::istream& is) {
  Dataset data;
  std::string line;
  if (!std::getline(is, line)) throw error("empty dataset file");
  data.d = static_cast<int>(std::count(line.begin(), line.end(), ','));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (int i = 0; i < data.d; ++i) {
      if (!std::getline(ss, cell, ',')) throw error("short dataset row");
      data.points.push_back(std::stod(cell));
    }
    if (!std::getline(ss, cell, ',')) throw error("missing label");
    data.labels.push_back(std::stoi(cell));
  }
  return data;
}

inline std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw error("cannot open for writing: " + path);
  os << content;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw error("cannot open for reading: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// FNV-1a digest of a config blob, for run manifests
inline std::string fnv1a_digest(const std::string& s) {
  std::uint64_t h = UINT64_C(0xcbf29ce484222325);
  for (unsigned char c : s) {
    h ^= c;
    h *= UINT64_C(0x100000001b3);
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tsybnet
