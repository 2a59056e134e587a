#include "flowgen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flowgen/error.hpp"
#include "flowgen/rng.hpp"

namespace flowgen {

double norm(Vec2 v) noexcept { return std::hypot(v.x, v.y); }

void Box2::expand(Vec2 p) noexcept {
  min.x = std::min(min.x, p.x);
  min.y = std::min(min.y, p.y);
  max.x = std::max(max.x, p.x);
  max.y = std::max(max.y, p.y);
}

Affine2 Affine2::rotation(double radians) noexcept {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {c, -s, s, c, 0, 0};
}

Affine2 Affine2::rotation_deg(double degrees) noexcept {
  return rotation(degrees * std::numbers::pi / 180.0);
}

Affine2 Affine2::about(Vec2 center, const Affine2& linear) noexcept {
  const Vec2 moved = linear.apply_linear(center);
  return {linear.a11, linear.a12, linear.a21, linear.a22,
          center.x - moved.x + linear.tx, center.y - moved.y + linear.ty};
}

double Affine2::operator_norm() const noexcept {
  // sigma_max^2 is the largest eigenvalue of A^T A.
  const double p = a11 * a11 + a21 * a21;
  const double q = a12 * a12 + a22 * a22;
  const double r = a11 * a12 + a21 * a22;
  const double half_trace = 0.5 * (p + q);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (p - q) * (p - q) + r * r));
  return std::sqrt(half_trace + disc);
}

Affine2 compose(const Affine2& outer, const Affine2& inner) noexcept {
  return {outer.a11 * inner.a11 + outer.a12 * inner.a21,
          outer.a11 * inner.a12 + outer.a12 * inner.a22,
          outer.a21 * inner.a11 + outer.a22 * inner.a21,
          outer.a21 * inner.a12 + outer.a22 * inner.a22,
          outer.a11 * inner.tx + outer.a12 * inner.ty + outer.tx,
          outer.a21 * inner.tx + outer.a22 * inner.ty + outer.ty};
}

Affine2 invert(const Affine2& t) {
  const double det = t.determinant();
  if (!(std::abs(det) > Affine2::kSingularDet)) {
    throw Error(ErrorCode::SingularTransform, "affine transform is singular (|det| <= 1e-8)");
  }
  Affine2 r;
  r.a11 = t.a22 / det;
  r.a12 = -t.a12 / det;
  r.a21 = -t.a21 / det;
  r.a22 = t.a11 / det;
  r.tx = -(r.a11 * t.tx + r.a12 * t.ty);
  r.ty = -(r.a21 * t.tx + r.a22 * t.ty);
  return r;
}

// ---------------------------------------------------------------------------

DeformField::DeformField(Box2 domain, int grid_w, int grid_h)
    : domain_(domain), grid_w_(grid_w), grid_h_(grid_h) {
  if (grid_w < 1 || grid_h < 1 || !(domain.width() > 0) || !(domain.height() > 0)) {
    throw Error(ErrorCode::InvalidArgument, "deformation grid needs >= 1 cell and a non-empty domain");
  }
  cell_w_ = domain.width() / grid_w;
  cell_h_ = domain.height() / grid_h;
  vectors_.assign(static_cast<std::size_t>(grid_w + 1) * static_cast<std::size_t>(grid_h + 1), Vec2{});
}

DeformField DeformField::random(Box2 domain, int grid_w, int grid_h, double amplitude, Rng& rng) {
  DeformField field(domain, grid_w, grid_h);
  field.amplitude_ = std::max(0.0, amplitude);
  for (auto& v : field.vectors_) {
    // Both draws are always consumed so the stream does not depend on amplitude.
    const double r = field.amplitude_ * std::sqrt(rng.uniform());
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    v = {r * std::cos(angle), r * std::sin(angle)};
  }
  return field;
}

void DeformField::set_vector(int i, int j, Vec2 v) {
  if (i < 0 || j < 0 || i > grid_w_ || j > grid_h_) {
    throw Error(ErrorCode::InvalidArgument, "control point index out of range");
  }
  vectors_[static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_w_ + 1) +
           static_cast<std::size_t>(i)] = v;
  amplitude_ = std::max(amplitude_, norm(v));
}

Vec2 DeformField::eval(Vec2 p) const noexcept {
  const double gx = std::clamp((p.x - domain_.min.x) / cell_w_, 0.0, static_cast<double>(grid_w_));
  const double gy = std::clamp((p.y - domain_.min.y) / cell_h_, 0.0, static_cast<double>(grid_h_));
  const int i = std::min(static_cast<int>(gx), grid_w_ - 1);
  const int j = std::min(static_cast<int>(gy), grid_h_ - 1);
  const double fx = gx - i;
  const double fy = gy - j;
  const Vec2 c00 = control(i, j), c10 = control(i + 1, j);
  const Vec2 c01 = control(i, j + 1), c11 = control(i + 1, j + 1);
  const double w00 = (1 - fx) * (1 - fy), w10 = fx * (1 - fy), w01 = (1 - fx) * fy, w11 = fx * fy;
  return {w00 * c00.x + w10 * c10.x + w01 * c01.x + w11 * c11.x,
          w00 * c00.y + w10 * c10.y + w01 * c01.y + w11 * c11.y};
}

void DeformField::jacobian(Vec2 p, double out[4]) const noexcept {
  const double rx = (p.x - domain_.min.x) / cell_w_;
  const double ry = (p.y - domain_.min.y) / cell_h_;
  const bool clamped_x = rx < 0.0 || rx > grid_w_;
  const bool clamped_y = ry < 0.0 || ry > grid_h_;
  const double gx = std::clamp(rx, 0.0, static_cast<double>(grid_w_));
  const double gy = std::clamp(ry, 0.0, static_cast<double>(grid_h_));
  const int i = std::min(static_cast<int>(gx), grid_w_ - 1);
  const int j = std::min(static_cast<int>(gy), grid_h_ - 1);
  const double fx = gx - i;
  const double fy = gy - j;
  const Vec2 c00 = control(i, j), c10 = control(i + 1, j);
  const Vec2 c01 = control(i, j + 1), c11 = control(i + 1, j + 1);
  const double dx_scale = clamped_x ? 0.0 : 1.0 / cell_w_;
  const double dy_scale = clamped_y ? 0.0 : 1.0 / cell_h_;
  out[0] = dx_scale * ((1 - fy) * (c10.x - c00.x) + fy * (c11.x - c01.x));
  out[1] = dy_scale * ((1 - fx) * (c01.x - c00.x) + fx * (c11.x - c10.x));
  out[2] = dx_scale * ((1 - fy) * (c10.y - c00.y) + fy * (c11.y - c01.y));
  out[3] = dy_scale * ((1 - fx) * (c01.y - c00.y) + fx * (c11.y - c10.y));
}

// ---------------------------------------------------------------------------

namespace {

std::optional<Affine2> try_invert(const Affine2& a) {
  if (!(std::abs(a.determinant()) > Affine2::kSingularDet)) return std::nullopt;
  return invert(a);
}

// Solves p + D(p) = y for p.
Vec2 invert_deform(const DeformField& field, Vec2 y) noexcept {
  Vec2 p = y - field.eval(y);
  for (int iter = 0; iter < 32; ++iter) {
    const Vec2 d = field.eval(p);
    const Vec2 r = {p.x + d.x - y.x, p.y + d.y - y.y};
    if (std::abs(r.x) + std::abs(r.y) < 1e-12 * (1.0 + std::abs(y.x) + std::abs(y.y))) break;
    double j[4];
    field.jacobian(p, j);
    const double m11 = 1.0 + j[0], m12 = j[1], m21 = j[2], m22 = 1.0 + j[3];
    const double det = m11 * m22 - m12 * m21;
    if (!(std::abs(det) > 1e-12)) {
      p = y - d;  // fixed-point fallback
      continue;
    }
    p.x -= (m22 * r.x - m12 * r.y) / det;
    p.y -= (-m21 * r.x + m11 * r.y) / det;
  }
  return p;
}

}  // namespace

WarpMap::WarpMap(const Affine2& affine) { push({affine, nullptr}); }

WarpMap::WarpMap(const Affine2& affine, std::shared_ptr<const DeformField> deform) {
  push({affine, std::move(deform)});
}

void WarpMap::push(const Stage& stage) {
  if (!stages_.empty()) {
    Stage& last = stages_.back();
    if (!stage.deform) {
      last.affine = compose(stage.affine, last.affine);
      inverses_.back() = try_invert(last.affine);
      return;
    }
    if (!last.deform && last.affine.is_identity()) {
      last = stage;
      inverses_.back() = try_invert(last.affine);
      return;
    }
  }
  stages_.push_back(stage);
  inverses_.push_back(try_invert(stage.affine));
}

Vec2 WarpMap::apply(Vec2 p) const noexcept {
  for (const Stage& s : stages_) {
    if (s.deform) p = p + s.deform->eval(p);
    p = s.affine.apply(p);
  }
  return p;
}

Vec2 WarpMap::apply_inverse(Vec2 q) const {
  for (std::size_t k = stages_.size(); k-- > 0;) {
    if (!inverses_[k]) {
      throw Error(ErrorCode::SingularTransform, "warp stage is not invertible");
    }
    q = inverses_[k]->apply(q);
    if (stages_[k].deform) q = invert_deform(*stages_[k].deform, q);
  }
  return q;
}

bool WarpMap::is_affine() const noexcept { return stages_.size() == 1 && !stages_.front().deform; }

bool WarpMap::has_deform() const noexcept {
  return std::any_of(stages_.begin(), stages_.end(), [](const Stage& s) { return s.deform != nullptr; });
}

Affine2 WarpMap::affine_part() const noexcept {
  Affine2 total = Affine2::identity();
  for (const Stage& s : stages_) total = compose(s.affine, total);
  return total;
}

double WarpMap::deform_bound() const noexcept {
  double bound = 0.0;
  double tail_norm = 1.0;  // product of norms of this and all later affines
  for (std::size_t k = stages_.size(); k-- > 0;) {
    tail_norm *= stages_[k].affine.operator_norm();
    if (stages_[k].deform) bound += stages_[k].deform->amplitude() * tail_norm;
  }
  return bound;
}

WarpMap WarpMap::then(const WarpMap& outer) const {
  WarpMap result = *this;
  for (const Stage& s : outer.stages_) result.push(s);
  return result;
}

WarpMap layer_motion(const WarpMap& background_motion, const WarpMap& object_motion) {
  return object_motion.then(background_motion);
}

Vec2 flow_at(const WarpMap& warp, Vec2 p) noexcept {
  if (warp.has_deform()) return warp.apply(p) - p;
  // Displacement form (A - I) p + t: a pure translation gives t exactly.
  const Affine2 a = warp.affine_part();
  return {(a.a11 - 1.0) * p.x + a.a12 * p.y + a.tx, a.a21 * p.x + (a.a22 - 1.0) * p.y + a.ty};
}

}  // namespace flowgen
