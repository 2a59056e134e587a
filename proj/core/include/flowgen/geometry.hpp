#pragma once

#include <memory>
#include <optional>
#include <vector>

namespace flowgen {

class Rng;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  bool operator==(const Vec2&) const = default;
};

double norm(Vec2 v) noexcept;

/// Axis-aligned rectangle, [min, max].
struct Box2 {
  Vec2 min;
  Vec2 max;

  double width() const noexcept { return max.x - min.x; }
  double height() const noexcept { return max.y - min.y; }
  Vec2 center() const noexcept { return {0.5 * (min.x + max.x), 0.5 * (min.y + max.y)}; }
  void expand(Vec2 p) noexcept;
  bool operator==(const Box2&) const = default;
};

/// p -> A p + t in image coordinates (origin top-left, x right, y down,
/// pixel centers at integer + 0.5).
struct Affine2 {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;
  double tx = 0.0, ty = 0.0;

  static constexpr double kSingularDet = 1e-8;

  static Affine2 identity() noexcept { return {}; }
  static Affine2 translation(double dx, double dy) noexcept { return {1, 0, 0, 1, dx, dy}; }
  static Affine2 rotation(double radians) noexcept;
  static Affine2 rotation_deg(double degrees) noexcept;
  static Affine2 scaling(double s) noexcept { return {s, 0, 0, s, 0, 0}; }
  static Affine2 scaling(double sx, double sy) noexcept { return {sx, 0, 0, sy, 0, 0}; }
  /// The linear part of `linear` applied about `center`: T(c) L T(-c).
  static Affine2 about(Vec2 center, const Affine2& linear) noexcept;

  Vec2 apply(Vec2 p) const noexcept { return {a11 * p.x + a12 * p.y + tx, a21 * p.x + a22 * p.y + ty}; }
  Vec2 apply_linear(Vec2 p) const noexcept { return {a11 * p.x + a12 * p.y, a21 * p.x + a22 * p.y}; }
  double determinant() const noexcept { return a11 * a22 - a12 * a21; }
  /// Largest singular value of the linear part.
  double operator_norm() const noexcept;
  bool is_identity() const noexcept { return *this == Affine2{}; }

  bool operator==(const Affine2&) const = default;
};

/// outer o inner: apply(result, p) == apply(outer, apply(inner, p)).
Affine2 compose(const Affine2& outer, const Affine2& inner) noexcept;

/// Throws Error(SingularTransform) when |det| <= 1e-8.
Affine2 invert(const Affine2& t);

/// Smooth displacement field: a control grid of 2D vectors spanning `domain`,
/// bilinearly interpolated, clamped to the border outside the domain.
class DeformField {
 public:
  /// Zero field (every control vector is zero).
  DeformField(Box2 domain, int grid_w, int grid_h);
  /// Control vectors drawn uniformly from the disk of radius `amplitude`.
  static DeformField random(Box2 domain, int grid_w, int grid_h, double amplitude, Rng& rng);

  Vec2 eval(Vec2 p) const noexcept;
  /// Jacobian of eval at p, row-major {du/dx, du/dy, dv/dx, dv/dy}.
  void jacobian(Vec2 p, double out[4]) const noexcept;

  int grid_w() const noexcept { return grid_w_; }
  int grid_h() const noexcept { return grid_h_; }
  const Box2& domain() const noexcept { return domain_; }
  double amplitude() const noexcept { return amplitude_; }
  const std::vector<Vec2>& vectors() const noexcept { return vectors_; }
  void set_vector(int i, int j, Vec2 v);

 private:
  Vec2 control(int i, int j) const noexcept {
    return vectors_[static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_w_ + 1) +
                    static_cast<std::size_t>(i)];
  }

  Box2 domain_;
  int grid_w_;
  int grid_h_;
  double cell_w_;
  double cell_h_;
  double amplitude_ = 0.0;
  std::vector<Vec2> vectors_;
};

/// Frame-to-frame mapping. A single stage is W(p) = A(p + D(p)); composed
/// motions keep a chain of such stages applied first to last.
class WarpMap {
 public:
  struct Stage {
    Affine2 affine;
    std::shared_ptr<const DeformField> deform;
  };

  WarpMap() : WarpMap(Affine2::identity()) {}
  explicit WarpMap(const Affine2& affine);
  WarpMap(const Affine2& affine, std::shared_ptr<const DeformField> deform);

  Vec2 apply(Vec2 p) const noexcept;
  /// Inverse mapping; deformation stages are inverted by Newton iteration.
  /// Throws Error(SingularTransform) if an affine stage is singular.
  Vec2 apply_inverse(Vec2 q) const;

  /// True when the map is a single affine stage without deformation.
  bool is_affine() const noexcept;
  bool has_deform() const noexcept;
  /// Product of all stage affines (the map with deformations removed).
  Affine2 affine_part() const noexcept;
  /// Sum of deformation amplitudes, each scaled by the norm of the affines it
  /// passes through: a bound on |W(p) - affine_part(p)|.
  double deform_bound() const noexcept;

  const std::vector<Stage>& stages() const noexcept { return stages_; }

  /// Appends `outer` after this map: result(p) = outer(this(p)).
  WarpMap then(const WarpMap& outer) const;

 private:
  void push(const Stage& stage);

  std::vector<Stage> stages_;
  std::vector<std::optional<Affine2>> inverses_;
};

/// Resolved motion of a layer: object motion first, background wraps it.
/// With an identity object motion the result equals `background_motion`.
WarpMap layer_motion(const WarpMap& background_motion, const WarpMap& object_motion);

/// W(p) - p. Defined for every p, including occluded or out-of-frame targets.
Vec2 flow_at(const WarpMap& warp, Vec2 p) noexcept;

}  // namespace flowgen
