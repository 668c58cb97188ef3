#pragma once

// JSON encoding of expression trees, coefficient maps and sample arrays.
//
//   {"kind": "const", "re": 1, "im": 0}
//   {"kind": "coord", "axis": 0}        {"kind": "norm1"}
//   {"kind": "polyenv", "k": 2}         {"kind": "expdecay", "rate": 0.5}
//   {"kind": "indicator", "at": [0, 1]}
//   {"kind": "add" | "mul", "args": [...]}
//   {"kind": "neg" | "conj" | "abs" | "arg" | "phase", "arg": {...}}
//   {"kind": "clip", "arg": {...}, "eps": 0.25}
//   {"kind": "recip", "arg": {...}, "witness": {"delta": 1, "K": 0}}
//
// Any node may carry "cert": {"M": ..., "k": ...}, a growth claim that is
// checked on a window before use.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "periodist/errors.hpp"
#include "periodist/expr.hpp"
#include "periodist/fourier.hpp"
#include "periodist/lattice.hpp"

namespace periodist {

using Json = nlohmann::json;

/// Schema error; `path()` is a JSON pointer to the offending field.
class SpecError : public InvalidInput {
 public:
  SpecError(std::string path, const std::string& what)
      : InvalidInput((path.empty() ? std::string("/") : path) + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

namespace json_detail {

inline const Json& field(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(path, std::string("missing field '") + key + "'");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SpecError(path, "expected a number");
  return j.get<double>();
}

inline std::int64_t integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SpecError(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline int small_int(const Json& j, const std::string& path) {
  const auto v = integer(j, path);
  if (v < -1000000 || v > 1000000) throw SpecError(path, "integer out of range");
  return static_cast<int>(v);
}

inline NodeKind parse_kind(const std::string& s, const std::string& path) {
  static const std::map<std::string, NodeKind> kinds = {
      {"const", NodeKind::constant}, {"coord", NodeKind::coord},     {"norm1", NodeKind::norm1},
      {"polyenv", NodeKind::polyenv}, {"expdecay", NodeKind::expdecay}, {"indicator", NodeKind::indicator},
      {"add", NodeKind::add},         {"mul", NodeKind::mul},         {"neg", NodeKind::neg},
      {"conj", NodeKind::conj},       {"abs", NodeKind::abs},         {"arg", NodeKind::arg},
      {"phase", NodeKind::phase},     {"clip", NodeKind::clip},       {"recip", NodeKind::recip},
  };
  auto it = kinds.find(s);
  if (it == kinds.end()) throw SpecError(path, "unknown node kind '" + s + "'");
  return it->second;
}

}  // namespace json_detail

inline Json expr_to_json(const Expr& e) {
  Json j;
  j["kind"] = std::string(kind_name(e->kind()));
  switch (e->kind()) {
    case NodeKind::constant:
      j["re"] = e->value().real();
      j["im"] = e->value().imag();
      break;
    case NodeKind::coord: j["axis"] = e->int_param(); break;
    case NodeKind::norm1: break;
    case NodeKind::polyenv: j["k"] = e->int_param(); break;
    case NodeKind::expdecay: j["rate"] = e->real_param(); break;
    case NodeKind::indicator: j["at"] = e->point(); break;
    case NodeKind::add:
    case NodeKind::mul: {
      Json args = Json::array();
      for (const auto& c : e->args()) args.push_back(expr_to_json(c));
      j["args"] = std::move(args);
      break;
    }
    case NodeKind::neg:
    case NodeKind::conj:
    case NodeKind::abs:
    case NodeKind::arg:
    case NodeKind::phase: j["arg"] = expr_to_json(e->arg()); break;
    case NodeKind::clip:
      j["arg"] = expr_to_json(e->arg());
      j["eps"] = e->real_param();
      break;
    case NodeKind::recip:
      j["arg"] = expr_to_json(e->arg());
      j["witness"] = {{"delta", e->witness().delta}, {"K", e->witness().K}};
      break;
  }
  if (const auto& c = e->declared()) j["cert"] = {{"M", c->M}, {"k", c->k}};
  return j;
}

/// Parses an expression; errors carry the JSON pointer of the bad field.
inline Expr expr_from_json(const Json& j, const std::string& path = "") {
  using namespace json_detail;
  const auto& kind_field = field(j, path, "kind");
  if (!kind_field.is_string()) throw SpecError(path + "/kind", "expected a string");
  const NodeKind kind = parse_kind(kind_field.get<std::string>(), path + "/kind");
  auto child = [&](const char* key) { return expr_from_json(field(j, path, key), path + "/" + key); };
  Expr e;
  try {
    switch (kind) {
      case NodeKind::constant: {
        const double re = j.contains("re") ? number(j["re"], path + "/re") : 0.0;
        const double im = j.contains("im") ? number(j["im"], path + "/im") : 0.0;
        e = expr::constant({re, im});
        break;
      }
      case NodeKind::coord: e = expr::coord(small_int(field(j, path, "axis"), path + "/axis")); break;
      case NodeKind::norm1: e = expr::norm1(); break;
      case NodeKind::polyenv: e = expr::polyenv(small_int(field(j, path, "k"), path + "/k")); break;
      case NodeKind::expdecay: e = expr::expdecay(number(field(j, path, "rate"), path + "/rate")); break;
      case NodeKind::indicator: {
        const auto& at = field(j, path, "at");
        if (!at.is_array()) throw SpecError(path + "/at", "expected an array of integers");
        std::vector<std::int64_t> pt;
        for (std::size_t i = 0; i < at.size(); ++i) pt.push_back(integer(at[i], path + "/at/" + std::to_string(i)));
        e = expr::indicator(std::move(pt));
        break;
      }
      case NodeKind::add:
      case NodeKind::mul: {
        const auto& args = field(j, path, "args");
        if (!args.is_array()) throw SpecError(path + "/args", "expected an array");
        std::vector<Expr> xs;
        for (std::size_t i = 0; i < args.size(); ++i)
          xs.push_back(expr_from_json(args[i], path + "/args/" + std::to_string(i)));
        e = kind == NodeKind::add ? expr::add(std::move(xs)) : expr::mul(std::move(xs));
        break;
      }
      case NodeKind::neg:
      case NodeKind::conj:
      case NodeKind::abs:
      case NodeKind::arg:
      case NodeKind::phase: e = expr::unary(kind, child("arg")); break;
      case NodeKind::clip: e = expr::clip(child("arg"), number(field(j, path, "eps"), path + "/eps")); break;
      case NodeKind::recip: {
        const auto& w = field(j, path, "witness");
        const std::string wp = path + "/witness";
        e = expr::recip(child("arg"), {number(field(w, wp, "delta"), wp + "/delta"),
                                       small_int(field(w, wp, "K"), wp + "/K")});
        break;
      }
    }
    if (j.contains("cert")) {
      const auto& c = j["cert"];
      const std::string cp = path + "/cert";
      e = expr::declare(e, {number(field(c, cp, "M"), cp + "/M"), small_int(field(c, cp, "k"), cp + "/k")});
    }
  } catch (const SpecError&) {
    throw;
  } catch (const InvalidInput& err) {
    throw SpecError(path, err.what());
  }
  return e;
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw SpecError(path, "expected a number or [re, im]");
}

inline Json coefficients_to_json(const CoefficientMap& c) {
  Json j;
  j["dimension"] = c.dimension();
  j["growth"] = {{"M", c.growth().M}, {"k", c.growth().k}};
  if (c.is_finite()) {
    Json recs = Json::array();
    for (const auto& [m, v] : c.entries()) recs.push_back({{"index", m.coords()}, {"value", complex_to_json(v)}});
    j["coefficients"] = std::move(recs);
  } else {
    j["sequence"] = expr_to_json(c.as_sequence().expr());
  }
  if (const auto& s = c.sampling())
    j["sampling"] = {{"samples_per_axis", s->samples_per_axis},
                     {"normalization", s->normalization},
                     {"nyquist_ambiguous", s->nyquist_ambiguous}};
  return j;
}

/// Accepts {"dimension": d, "coefficients": [{"index": [...], "value": [re, im]}, ...]}
/// or {"dimension": d, "sequence": <expr>}.
inline CoefficientMap coefficients_from_json(const Json& j, const std::string& path = "") {
  using namespace json_detail;
  const auto d = integer(field(j, path, "dimension"), path + "/dimension");
  if (d < 1) throw SpecError(path + "/dimension", "must be >= 1");
  const auto dim = static_cast<std::size_t>(d);
  if (j.contains("sequence")) {
    try {
      return CoefficientMap::from_sequence(SlowSequence(expr_from_json(j["sequence"], path + "/sequence"), dim));
    } catch (const SpecError&) {
      throw;
    } catch (const InvalidInput& e) {
      throw SpecError(path + "/sequence", e.what());
    }
  }
  const auto& recs = field(j, path, "coefficients");
  if (!recs.is_array()) throw SpecError(path + "/coefficients", "expected an array");
  std::map<LatticeIndex, Complex> entries;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const std::string rp = path + "/coefficients/" + std::to_string(i);
    const auto& idx = field(recs[i], rp, "index");
    if (!idx.is_array() || idx.size() != dim) throw SpecError(rp + "/index", "expected " + std::to_string(dim) + " integers");
    std::vector<std::int64_t> m;
    for (std::size_t k = 0; k < idx.size(); ++k) m.push_back(integer(idx[k], rp + "/index/" + std::to_string(k)));
    if (!entries.emplace(LatticeIndex(std::move(m)), complex_from_json(field(recs[i], rp, "value"), rp + "/value")).second)
      throw SpecError(rp + "/index", "duplicate index");
  }
  return CoefficientMap::finite(dim, std::move(entries));
}

inline std::vector<Complex> samples_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SpecError(path, "expected an array of samples");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from_json(j[i], path + "/" + std::to_string(i)));
  return out;
}

namespace detail {
inline std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}
}  // namespace detail

/// Little-endian (re, im) double pairs, row-major.
inline std::vector<Complex> samples_from_bytes(const std::vector<unsigned char>& bytes) {
  if (bytes.size() % 16 != 0) throw InvalidInput("binary samples: size is not a multiple of 16 bytes");
  std::vector<Complex> out(bytes.size() / 16);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double parts[2];
    for (int p = 0; p < 2; ++p) {
      std::uint64_t raw;
      std::memcpy(&raw, bytes.data() + 16 * i + 8 * p, 8);
      raw = detail::to_little_endian(raw);
      parts[p] = std::bit_cast<double>(raw);
    }
    out[i] = {parts[0], parts[1]};
  }
  return out;
}

inline std::vector<unsigned char> samples_to_bytes(const std::vector<Complex>& samples) {
  std::vector<unsigned char> bytes(samples.size() * 16);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double parts[2] = {samples[i].real(), samples[i].imag()};
    for (int p = 0; p < 2; ++p) {
      const std::uint64_t raw = detail::to_little_endian(std::bit_cast<std::uint64_t>(parts[p]));
      std::memcpy(bytes.data() + 16 * i + 8 * p, &raw, 8);
    }
  }
  return bytes;
}

inline std::vector<Complex> read_binary_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open sample file '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return samples_from_bytes(bytes);
}

}  // namespace periodist
