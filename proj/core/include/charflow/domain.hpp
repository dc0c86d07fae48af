#pragma once

#include "charflow/common.hpp"

namespace charflow {

/// A point in the normalized domain: x in [-1,1]^3, t in [0,1].
struct Spacetime {
  Vec3 x = Vec3::Zero();
  double t = 0.0;
};

inline constexpr double kDomainSlack = 1e-9;

bool in_spatial_box(const Vec3& x, double slack = kDomainSlack);
bool in_time_interval(double t, double slack = kDomainSlack);
bool in_domain(const Spacetime& p, double slack = kDomainSlack);
void require_in_domain(const Spacetime& p, const char* where);
void require_time(double t, const char* where);

/// Affine map between world units and the normalized domain
/// [-1,1]^3 x [0,1]. Scene configs carry this; networks only ever see
/// normalized coordinates.
struct DomainTransform {
  Vec3 world_lo = Vec3(-1, -1, -1);
  Vec3 world_hi = Vec3(1, 1, 1);
  double time_lo = 0.0;
  double time_hi = 1.0;

  Vec3 to_normalized(const Vec3& world) const;
  Vec3 to_world(const Vec3& normalized) const;
  double time_to_normalized(double world_t) const;
  double time_to_world(double normalized_t) const;
  Spacetime to_normalized(const Vec3& world, double world_t) const;

  bool is_identity() const;
};

}  // namespace charflow
