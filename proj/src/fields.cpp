#include "ivtree/fields.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

#include "ivtree/error.hpp"

namespace ivtree {

int field_index(int spin, int m, int k) {
  if (m < 0 || m > k) {
    std::ostringstream os;
    os << "successor count m = " << m << " outside [0, " << k << "]";
    throw Error(ErrorCode::IndexOutOfRange, os.str());
  }
  if (spin != 1 && spin != -1) throw Error(ErrorCode::InvalidSpin, "centre spin must be +1 or -1");
  return spin == 1 ? m : (k + 1) + m;
}

BoundaryFieldVector::BoundaryFieldVector(int order, std::vector<double> values)
    : k(order), h(std::move(values)) {
  if (k < 2) throw Error(ErrorCode::TreeOrderTooSmall, "field vector needs k >= 2");
  if (h.size() != static_cast<std::size_t>(2 * (k + 1))) {
    std::ostringstream os;
    os << "field vector for k = " << k << " needs " << 2 * (k + 1) << " entries, got " << h.size();
    throw Error(ErrorCode::InvalidFieldVector, os.str());
  }
  for (double x : h) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidFieldVector, "field entries must be finite");
  }
}

BoundaryFieldVector BoundaryFieldVector::zeros(int k) {
  return BoundaryFieldVector(k, std::vector<double>(2 * (k + 1), 0.0));
}

BoundaryFieldVector corners_to_fields(double p, double q, double r, double s, int k) {
  if (k < 2) throw Error(ErrorCode::TreeOrderTooSmall, "field vector needs k >= 2");
  BoundaryFieldVector out = BoundaryFieldVector::zeros(k);
  const double tail_sign = (k % 2 == 0) ? 1.0 : -1.0;
  for (int m = 0; m <= k; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    const double wl = static_cast<double>(k - m) / k;
    const double wr = static_cast<double>(m) / k;
    out.at(1, m) = sign * (wl * p + tail_sign * wr * q);
    out.at(-1, m) = sign * (wl * r + tail_sign * wr * s);
  }
  // Corners exactly, not through the weights.
  out.at(1, 0) = p;
  out.at(1, k) = q;
  out.at(-1, 0) = r;
  out.at(-1, k) = s;
  return out;
}

BoundaryFieldVector embed_invariant(double x, const ModelParams& params) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "reduced coordinate must be positive and finite, got " << x;
    throw Error(ErrorCode::NonPositiveArgument, os.str());
  }
  const int k = params.k;
  const double lx = std::log(x);
  if (params.even()) {
    // v_1 = v_{k+2} = x, v_{k+1} = v_{2(k+1)} = 1/x
    const double p = k * lx;
    return corners_to_fields(p, -p, p, -p, k);
  }
  // v_{k+1} = v_{k+2} = x^{1/(k+1)}, v_1 = v_{2(k+1)} = x^{k/(k+1)}
  const double kk = static_cast<double>(k);
  const double big = kk * kk / (kk + 1.0) * lx;
  const double small = kk / (kk + 1.0) * lx;
  return corners_to_fields(big, small, small, big, k);
}

FieldCoordinates fields_to_uv(const BoundaryFieldVector& h) {
  FieldCoordinates out;
  out.u.reserve(h.size());
  out.v.reserve(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double u = std::exp(h.h[i]);
    if (!std::isfinite(u) || u <= 0.0) {
      std::ostringstream os;
      os << "u[" << i << "] = exp(" << h.h[i] << ") is not representable";
      throw Error(ErrorCode::FieldOverflow, os.str());
    }
    out.u.push_back(u);
    out.v.push_back(std::exp(h.h[i] / h.k));
  }
  return out;
}

std::string fields_to_json(const BoundaryFieldVector& h) {
  nlohmann::ordered_json j;
  j["k"] = h.k;
  j["h"] = h.h;
  return j.dump();
}

BoundaryFieldVector fields_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidFieldVector, std::string("field vector JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("k") || !j.contains("h") || !j["k"].is_number_integer() ||
      !j["h"].is_array()) {
    throw Error(ErrorCode::InvalidFieldVector, R"(field vector JSON must look like {"k": int, "h": [reals]})");
  }
  std::vector<double> values;
  for (const auto& e : j["h"]) {
    if (!e.is_number()) throw Error(ErrorCode::InvalidFieldVector, "field entries must be numbers");
    values.push_back(e.get<double>());
  }
  return BoundaryFieldVector(j["k"].get<int>(), std::move(values));
}

}  // namespace ivtree
