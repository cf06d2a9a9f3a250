#include "qconf/affinoid.hpp"

#include <numeric>
#include <sstream>

namespace qconf {

Ext log_dist(const PAdic& x, const PAdic& y) { return (x - y).log_abs(); }

Affinoid::Affinoid(const Field& F, Disk outer, std::vector<Disk> holes)
    : F_(&F), outer_(std::move(outer)), holes_(std::move(holes)) {
  if (outer_.c.field() && outer_.c.field() != F_) throw DomainError("affinoid: outer center in a different field");
  for (std::size_t i = 0; i < holes_.size(); ++i) {
    const Disk& h = holes_[i];
    if (h.c.field() && h.c.field() != F_) throw DomainError("affinoid: hole center in a different field");
    if (log_dist(h.c, outer_.c) > Ext(outer_.log_r))
      throw DomainError("affinoid: hole " + std::to_string(i + 1) + " is centered outside the outer disk");
    if (h.log_r > outer_.log_r) throw DomainError("affinoid: hole " + std::to_string(i + 1) + " is larger than the outer disk");
    for (std::size_t j = 0; j < i; ++j) {
      const Disk& g = holes_[j];
      if (log_dist(h.c, g.c) < Ext(std::max(h.log_r, g.log_r)))
        throw DomainError("affinoid: holes " + std::to_string(j + 1) + " and " + std::to_string(i + 1) + " overlap");
    }
  }
}

bool Affinoid::contains(const PAdic& c) const {
  if (log_dist(c, outer_.c) > Ext(outer_.log_r)) return false;
  return !hole_containing(c).has_value();
}

std::optional<std::size_t> Affinoid::hole_containing(const PAdic& c) const {
  for (std::size_t i = 0; i < holes_.size(); ++i)
    if (log_dist(c, holes_[i].c) < Ext(holes_[i].log_r)) return i;
  return std::nullopt;
}

bool Affinoid::contains_generic(const GenericPoint& t) const {
  if (t.log_rho > outer_.log_r || log_dist(t.c, outer_.c) > Ext(outer_.log_r)) return false;
  for (const Disk& h : holes_)
    if (max(log_dist(t.c, h.c), Ext(t.log_rho)) < Ext(h.log_r)) return false;
  return true;
}

Rational Affinoid::r_X() const {
  Rational r = outer_.log_r;
  for (const Disk& h : holes_) r = std::min(r, h.log_r);
  return r;
}

Rational Affinoid::s_X() const {
  const Ext a = outer_.c.log_abs();
  return max(a, Ext(outer_.log_r)).value();
}

Rational Affinoid::rho(const PAdic& c) const {
  if (!contains(c)) throw DomainError("rho_c_X: point " + c.str() + " is not in X");
  Ext r(outer_.log_r);
  for (const Disk& h : holes_) r = min(r, log_dist(c, h.c));
  return r.value();
}

Rational Affinoid::rho(const GenericPoint& t) const {
  if (!contains_generic(t)) throw DomainError("generic point outside X");
  Ext r(outer_.log_r);
  for (const Disk& h : holes_) r = min(r, max(log_dist(t.c, h.c), Ext(t.log_rho)));
  return r.value();
}

std::vector<GenericPoint> Affinoid::shilov_points() const {
  std::vector<GenericPoint> pts;
  pts.push_back({outer_.c, outer_.log_r});
  for (const Disk& h : holes_) pts.push_back({h.c, h.log_r});
  return pts;
}

bool Affinoid::same_as(const Affinoid& o) const {
  if (F_ != o.F_ || holes_.size() != o.holes_.size()) return false;
  auto same_disk = [](const Disk& a, const Disk& b) { return a.log_r == b.log_r && a.c.equals(b.c); };
  if (!same_disk(outer_, o.outer_)) return false;
  for (std::size_t i = 0; i < holes_.size(); ++i)
    if (!same_disk(holes_[i], o.holes_[i])) return false;
  return true;
}

std::string Affinoid::str() const {
  std::ostringstream os;
  os << "D+(" << outer_.c.str() << ", p^" << rational_str(outer_.log_r) << ")";
  for (const Disk& h : holes_) os << " - D-(" << h.c.str() << ", p^" << rational_str(h.log_r) << ")";
  return os.str();
}

bool disk_q_invariant(const PAdic& c, const Rational& log_r, const PAdic& q) {
  if (q.log_abs() != Ext(0)) return false;
  if (!q.field()) return false;
  const PAdic one = PAdic::one(*q.field());
  const Ext lhs = (q - one).log_abs() + c.log_abs();
  return lhs < Ext(log_r);
}

QInvariance affinoid_q_invariant(const Affinoid& X, const PAdic& q, int bound) {
  QInvariance r;
  if (q.log_abs() != Ext(0)) {
    r.reason = "|q| != 1";
    return r;
  }
  if (!disk_q_invariant(X.outer().c, X.outer().log_r, q)) {
    r.reason = "outer disk is not q-invariant";
    return r;
  }
  const auto& holes = X.holes();
  std::vector<bool> hit(holes.size(), false);
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const PAdic image = q * holes[i].c;
    std::optional<std::size_t> found;
    for (std::size_t j = 0; j < holes.size(); ++j)
      if (holes[j].log_r == holes[i].log_r && log_dist(image, holes[j].c) < Ext(holes[j].log_r)) found = j;
    if (!found || hit[*found]) {
      r.reason = "q does not permute the holes (image of hole " + std::to_string(i + 1) + ")";
      r.permutation.clear();
      return r;
    }
    hit[*found] = true;
    r.permutation.push_back(*found);
  }
  std::int64_t k0 = 1;
  for (std::size_t i = 0; i < holes.size(); ++i) {
    PAdic qk = q;
    int k = 1;
    for (; k <= bound; ++k, qk *= q)
      if (disk_q_invariant(holes[i].c, holes[i].log_r, qk)) break;
    if (k > bound) {
      r.kind = QInvariance::Kind::undecided;
      r.reason = "no power q^k with k <= " + std::to_string(bound) + " fixes hole " + std::to_string(i + 1);
      return r;
    }
    k0 = std::lcm(k0, static_cast<std::int64_t>(k));
  }
  r.kind = QInvariance::Kind::invariant;
  r.k0 = k0;
  return r;
}

}  // namespace qconf
