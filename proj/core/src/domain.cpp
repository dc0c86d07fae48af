#include "charflow/domain.hpp"

#include <cmath>
#include <string>

namespace charflow {

bool in_spatial_box(const Vec3& x, double slack) {
  return x.allFinite() && x.cwiseAbs().maxCoeff() <= 1.0 + slack;
}

bool in_time_interval(double t, double slack) {
  return std::isfinite(t) && t >= -slack && t <= 1.0 + slack;
}

bool in_domain(const Spacetime& p, double slack) {
  return in_spatial_box(p.x, slack) && in_time_interval(p.t, slack);
}

void require_in_domain(const Spacetime& p, const char* where) {
  if (!in_domain(p)) {
    throw DomainError(std::string(where) + ": query (" + format_double(p.x.x()) + ", " +
                      format_double(p.x.y()) + ", " + format_double(p.x.z()) + ", t=" +
                      format_double(p.t) + ") outside normalized domain");
  }
}

void require_time(double t, const char* where) {
  if (!in_time_interval(t)) {
    throw DomainError(std::string(where) + ": time " + format_double(t) +
                      " outside normalized interval [0,1]");
  }
}

Vec3 DomainTransform::to_normalized(const Vec3& world) const {
  const Vec3 span = world_hi - world_lo;
  return 2.0 * (world - world_lo).cwiseQuotient(span) - Vec3::Ones();
}

Vec3 DomainTransform::to_world(const Vec3& normalized) const {
  const Vec3 span = world_hi - world_lo;
  return world_lo + 0.5 * (normalized + Vec3::Ones()).cwiseProduct(span);
}

double DomainTransform::time_to_normalized(double world_t) const {
  return (world_t - time_lo) / (time_hi - time_lo);
}

double DomainTransform::time_to_world(double normalized_t) const {
  return time_lo + normalized_t * (time_hi - time_lo);
}

Spacetime DomainTransform::to_normalized(const Vec3& world, double world_t) const {
  return Spacetime{to_normalized(world), time_to_normalized(world_t)};
}

bool DomainTransform::is_identity() const {
  return world_lo == Vec3(-1, -1, -1) && world_hi == Vec3(1, 1, 1) && time_lo == 0.0 &&
         time_hi == 1.0;
}

}  // namespace charflow
