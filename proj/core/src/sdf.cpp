#include "charflow/sdf.hpp"

#include <cmath>

namespace charflow {

Vec3 SdfInterface::normal(const Vec3& x) const {
  const Vec3 g = gradient(x);
  const double n = g.norm();
  if (n <= 1e-6) {
    throw NumericError("SDF normal undefined: |grad s| <= 1e-6 at (" + format_double(x.x()) +
                       ", " + format_double(x.y()) + ", " + format_double(x.z()) + ")");
  }
  return g / n;
}

struct AnalyticSdf::Node {
  enum class Kind { Sphere, Box, Cylinder, Translate, Union } kind;
  Vec3 v = Vec3::Zero();        // center / halfwidths / offset
  double r = 0.0;               // radius
  double h = 0.0;               // half height
  int axis = 2;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = AnalyticSdf::Node;

double node_sdf(const Node& n, const Vec3& x);
Vec3 node_grad(const Node& n, const Vec3& x);

double sphere_sdf(const Node& n, const Vec3& x) { return (x - n.v).norm() - n.r; }

Vec3 sphere_grad(const Node& n, const Vec3& x) {
  const Vec3 d = x - n.v;
  const double len = d.norm();
  if (len < 1e-12) return Vec3::Zero();  // center: medial axis
  return d / len;
}

double box_sdf(const Node& n, const Vec3& x) {
  const Vec3 q = x.cwiseAbs() - n.v;
  const Vec3 outside = q.cwiseMax(0.0);
  const double inside = std::min(q.maxCoeff(), 0.0);
  return outside.norm() + inside;
}

Vec3 box_grad(const Node& n, const Vec3& x) {
  const Vec3 q = x.cwiseAbs() - n.v;
  const Vec3 outside = q.cwiseMax(0.0);
  const double out_len = outside.norm();
  Vec3 g;
  if (out_len > 0.0) {
    g = outside / out_len;
  } else {
    // inside: steepest ascent along the face closest to the point
    int axis = 0;
    q.maxCoeff(&axis);
    g = Vec3::Zero();
    g(axis) = 1.0;
  }
  for (int i = 0; i < 3; ++i) {
    if (x(i) < 0.0) g(i) = -g(i);
  }
  return g;
}

double cylinder_sdf(const Node& n, const Vec3& x) {
  const int a0 = (n.axis + 1) % 3, a1 = (n.axis + 2) % 3;
  const double rho = std::hypot(x(a0), x(a1));
  const double dr = rho - n.r;
  const double dz = std::abs(x(n.axis)) - n.h;
  const double outside = std::hypot(std::max(dr, 0.0), std::max(dz, 0.0));
  return outside + std::min(std::max(dr, dz), 0.0);
}

Vec3 cylinder_grad(const Node& n, const Vec3& x) {
  const int a0 = (n.axis + 1) % 3, a1 = (n.axis + 2) % 3;
  const double rho = std::hypot(x(a0), x(a1));
  const double dr = rho - n.r;
  const double dz = std::abs(x(n.axis)) - n.h;
  Vec3 radial = Vec3::Zero();
  if (rho > 1e-12) {
    radial(a0) = x(a0) / rho;
    radial(a1) = x(a1) / rho;
  }
  Vec3 axial = Vec3::Zero();
  axial(n.axis) = x(n.axis) >= 0.0 ? 1.0 : -1.0;
  if (dr > 0.0 && dz > 0.0) {
    const double len = std::hypot(dr, dz);
    return (dr * radial + dz * axial) / len;
  }
  if (dr >= dz) return radial;
  return axial;
}

double node_sdf(const Node& n, const Vec3& x) {
  switch (n.kind) {
    case Node::Kind::Sphere:
      return sphere_sdf(n, x);
    case Node::Kind::Box:
      return box_sdf(n, x);
    case Node::Kind::Cylinder:
      return cylinder_sdf(n, x);
    case Node::Kind::Translate:
      return node_sdf(*n.a, x - n.v);
    case Node::Kind::Union:
      return std::min(node_sdf(*n.a, x), node_sdf(*n.b, x));
  }
  return 0.0;
}

Vec3 node_grad(const Node& n, const Vec3& x) {
  switch (n.kind) {
    case Node::Kind::Sphere:
      return sphere_grad(n, x);
    case Node::Kind::Box:
      return box_grad(n, x);
    case Node::Kind::Cylinder:
      return cylinder_grad(n, x);
    case Node::Kind::Translate:
      return node_grad(*n.a, x - n.v);
    case Node::Kind::Union:
      return node_sdf(*n.a, x) <= node_sdf(*n.b, x) ? node_grad(*n.a, x) : node_grad(*n.b, x);
  }
  return Vec3::Zero();
}

}  // namespace

AnalyticSdf AnalyticSdf::sphere(const Vec3& center, double radius) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Sphere;
  n->v = center;
  n->r = radius;
  return AnalyticSdf(std::move(n));
}

AnalyticSdf AnalyticSdf::box(const Vec3& halfwidths) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Box;
  n->v = halfwidths;
  return AnalyticSdf(std::move(n));
}

AnalyticSdf AnalyticSdf::capped_cylinder(int axis, double radius, double half_height) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Cylinder;
  n->axis = axis;
  n->r = radius;
  n->h = half_height;
  return AnalyticSdf(std::move(n));
}

AnalyticSdf AnalyticSdf::translate(AnalyticSdf inner, const Vec3& offset) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Translate;
  n->v = offset;
  n->a = std::move(inner.root_);
  return AnalyticSdf(std::move(n));
}

AnalyticSdf AnalyticSdf::unite(AnalyticSdf a, AnalyticSdf b) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Union;
  n->a = std::move(a.root_);
  n->b = std::move(b.root_);
  return AnalyticSdf(std::move(n));
}

double AnalyticSdf::sdf(const Vec3& x) const { return node_sdf(*root_, x); }

Vec3 AnalyticSdf::gradient(const Vec3& x) const { return node_grad(*root_, x); }

double obstacle_mask(double s, double eps) {
  if (s <= 0.0) return 0.0;
  if (s >= eps) return 1.0;
  return 0.5 * (1.0 - std::cos(M_PI * s / eps));
}

}  // namespace charflow
