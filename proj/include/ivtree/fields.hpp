#pragma once

#include <string>
#include <vector>

#include "ivtree/model.hpp"

namespace ivtree {

/// Configuration class of a semi-ball B_1(x): the centre spin and the number
/// of -1 spins among its k successors.
struct SemiBallClass {
  int spin = 1;
  int m = 0;
};

/// Index into the 2(k+1) field vector: the plus family (spin +1, m ascending)
/// first, then the minus family.
int field_index(int spin, int m, int k);

/// The boundary field h, stored in log space (raw field values).
struct BoundaryFieldVector {
  int k = 2;
  std::vector<double> h;

  BoundaryFieldVector() = default;
  BoundaryFieldVector(int k, std::vector<double> values);

  static BoundaryFieldVector zeros(int k);

  double at(int spin, int m) const { return h[field_index(spin, m, k)]; }
  double& at(int spin, int m) { return h[field_index(spin, m, k)]; }
  std::size_t size() const { return h.size(); }
};

/// u_i = exp(h_i) and v_i = u_i^{1/k}.
struct FieldCoordinates {
  std::vector<double> u;
  std::vector<double> v;
};

/// Fill a field vector from its four corner values
///   h(+,0) = p, h(+,k) = q, h(-,0) = r, h(-,k) = s
/// using the sign-weighted interpolation that makes every interior equation
/// of the compatibility system a consequence of the corner ones:
///   (-1)^m h(+,m) = ((k-m) p + (-1)^k m q) / k
///   (-1)^m h(-,m) = ((k-m) r + (-1)^k m s) / k
BoundaryFieldVector corners_to_fields(double p, double q, double r, double s, int k);

/// Field vector of the one-dimensional invariant set selected by the parity
/// of k (set A for even k, set B for odd k) at reduced coordinate x > 0.
BoundaryFieldVector embed_invariant(double x, const ModelParams& params);

/// Throws Error(FieldOverflow) if some u_i is not representable.
FieldCoordinates fields_to_uv(const BoundaryFieldVector& h);

/// {"k": int, "h": [reals]}
std::string fields_to_json(const BoundaryFieldVector& h);
BoundaryFieldVector fields_from_json(const std::string& text);

}  // namespace ivtree
