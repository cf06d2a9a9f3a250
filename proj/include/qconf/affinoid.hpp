#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qconf/padic.hpp"

namespace qconf {

// Radii are p-power rationals: a disk of radius R is stored as log_p R.
struct Disk {
  PAdic c;
  Rational log_r{0};
};

// A generic point t_{c,rho}: only the pair is stored.
struct GenericPoint {
  PAdic c;
  Rational log_rho{0};
};

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// D^+(c_0, R_0) minus the open disks D^-(c_i, R_i).
class Affinoid {
 public:
  Affinoid(const Field& F, Disk outer, std::vector<Disk> holes = {});

  static Affinoid disk(const Field& F, const PAdic& c, const Rational& log_r) { return Affinoid(F, {c, log_r}); }

  const Field& field() const { return *F_; }
  const Disk& outer() const { return outer_; }
  const std::vector<Disk>& holes() const { return holes_; }
  std::size_t hole_count() const { return holes_.size(); }

  // Closed outer disk, open holes; |c - c_i| = R_i counts as inside X.
  bool contains(const PAdic& c) const;
  // Index of the hole containing c, if any.
  std::optional<std::size_t> hole_containing(const PAdic& c) const;
  bool contains_generic(const GenericPoint& t) const;

  Rational r_X() const;
  Rational s_X() const;
  // log_p rho_{c,X}; throws DomainError when c is not in X.
  Rational rho(const PAdic& c) const;
  // log_p of the radius of the largest open disk around t_{c,rho} inside X.
  Rational rho(const GenericPoint& t) const;
  // (c_0, R_0) followed by (c_i, R_i).
  std::vector<GenericPoint> shilov_points() const;

  bool same_as(const Affinoid& o) const;
  std::string str() const;

 private:
  const Field* F_;
  Disk outer_;
  std::vector<Disk> holes_;
};

// |x - y| as log_p (-inf when equal at precision).
Ext log_dist(const PAdic& x, const PAdic& y);

// |q| = 1 and |q - 1||c| < R.
bool disk_q_invariant(const PAdic& c, const Rational& log_r, const PAdic& q);

struct QInvariance {
  enum class Kind { invariant, not_invariant, undecided };
  Kind kind = Kind::not_invariant;
  std::int64_t k0 = 0;
  // permutation[i] = index of the hole D^-(q c_i, R_i) lands in.
  std::vector<std::size_t> permutation;
  std::string reason;
};

inline constexpr int kQInvariantPowerBound = 64;

QInvariance affinoid_q_invariant(const Affinoid& X, const PAdic& q, int bound = kQInvariantPowerBound);

}  // namespace qconf
