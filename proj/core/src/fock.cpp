#include "adeh/fock.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace adeh::fock {

namespace {

Rational make_q(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Monomial merge_monomials(const Monomial& x, const Monomial& y) {
  Monomial r;
  r.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].first < y[j].first) {
      r.push_back(x[i++]);
    } else if (y[j].first < x[i].first) {
      r.push_back(y[j++]);
    } else {
      r.emplace_back(x[i].first, x[i].second + y[j].second);
      ++i;
      ++j;
    }
  }
  while (i < x.size()) r.push_back(x[i++]);
  while (j < y.size()) r.push_back(y[j++]);
  return r;
}

FockPoly scale_rational(const FockPoly& p, const Rational& q) {
  FockPoly r(&p.vars(), p.cap());
  if (q == 0) return r;
  for (const auto& [m, c] : p.terms()) r.add_term(m, c * q);
  return r;
}

FockPoly scale_num(const FockPoly& p, const Num& s) {
  FockPoly r(&p.vars(), p.cap());
  if (s.is_zero()) return r;
  for (const auto& [m, c] : p.terms()) r.add_term(m, c * s);
  return r;
}

/** (sum_v coef[v] * O_v) p, O = multiplication by y_v or d/dy_v. */
FockPoly linear_apply(const FockPoly& p, const std::vector<Num>& coef,
                      bool deriv) {
  FockPoly out(&p.vars(), p.cap());
  const int V = p.vars().size();
  for (int v = 0; v < V; ++v) {
    if (coef[v].is_zero()) continue;
    FockPoly t = deriv ? diff_variable(p, v) : mul_variable(p, v);
    for (const auto& [m, c] : t.terms()) out.add_term(m, c * coef[v]);
  }
  return out;
}

/**
 * exp(sum_v coef[v] O_v) p, exact under the cap: the derivative branch is
 * nilpotent and the multiplication branch strictly raises weight.
 */
FockPoly exp_apply(const FockPoly& p, const std::vector<Num>& coef,
                   bool deriv) {
  FockPoly out = p;
  FockPoly cur = p;
  for (long order = 1; !cur.is_zero(); ++order) {
    FockPoly next = linear_apply(cur, coef, deriv);
    if (next.is_zero()) break;
    next = scale_rational(next, make_q(1, order));
    out = out + next;
    cur = std::move(next);
  }
  return out;
}

/** Weight of a (weight-homogeneous) polynomial; 0 for the zero poly. */
int homogeneous_weight(const FockPoly& p) {
  if (p.is_zero()) return 0;
  return monomial_weight(p.vars(), p.terms().begin()->first);
}

bool poly_equal(const FockPoly* x, const FockPoly* y) {
  static const std::map<Monomial, Num> kEmpty;
  const auto& tx = x ? x->terms() : kEmpty;
  const auto& ty = y ? y->terms() : kEmpty;
  if (tx.size() != ty.size()) return false;
  auto it = ty.begin();
  for (const auto& [m, c] : tx) {
    if (m != it->first || c != it->second) return false;
    ++it;
  }
  return true;
}

/**
 * The multiplication (sign applies to beta_{i,l}) and derivative (opposite
 * sign on beta_{i,-l}, divided by the weight) coefficient vectors of
 * Gamma^{sign*alpha_i} over a label set.
 */
void vertex_coefficients(const LabelSet& vars, const coeffs::BetaTable& beta,
                         int i, int sign, std::vector<Num>* mult,
                         std::vector<Num>* deriv) {
  const unsigned L = beta.conductor;
  const int V = vars.size();
  mult->assign(V, Num::zero(L));
  deriv->assign(V, Num::zero(L));
  for (int v = 0; v < V; ++v) {
    Label l = vars.label(v);
    const int w = vars.weight(v);
    Num bp = beta.pos(i, l.a - 1);
    Num bn = beta.neg(i, l.a - 1);
    (*mult)[v] = sign > 0 ? bp : -bp;
    (*deriv)[v] = (sign > 0 ? -bn : bn) * make_q(1, w);
  }
}

void block_accumulate(LaurentBlock* block, int key, const FockPoly& comp) {
  auto it = block->find(key);
  if (it == block->end()) {
    block->emplace(key, comp);
  } else {
    it->second = it->second + comp;
  }
}

}  // namespace

// ---------------------------------------------------------------- LabelSet

LabelSet::LabelSet(const rootsys::CoxeterData& cox, int weight_cap)
    : h_(cox.h), rank_(cox.rank), cap_(weight_cap), exps_(cox.exponents) {
  if (weight_cap < 1)
    throw std::invalid_argument("LabelSet: weight cap must be >= 1");
  std::vector<std::pair<int, Label>> found;
  for (int a = 1; a <= rank_; ++a)
    for (int n = 0;; ++n) {
      const int w = exps_[a - 1] + n * h_;
      if (w > cap_) break;
      found.push_back({w, Label{a, n}});
    }
  std::sort(found.begin(), found.end(),
            [](const auto& x, const auto& y) {
              return x.first != y.first ? x.first < y.first
                                        : x.second.a < y.second.a;
            });
  for (int idx = 0; idx < static_cast<int>(found.size()); ++idx) {
    weights_.push_back(found[idx].first);
    labels_.push_back(found[idx].second);
    index_[{found[idx].second.a, found[idx].second.n}] = idx;
  }
}

int LabelSet::index(Label l) const {
  auto it = index_.find({l.a, l.n});
  if (it == index_.end())
    throw std::out_of_range("label (" + std::to_string(l.a) + "," +
                            std::to_string(l.n) + ") outside the label set");
  return it->second;
}

std::optional<int> LabelSet::find(Label l) const {
  auto it = index_.find({l.a, l.n});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string LabelSet::var_name(int idx) const {
  Label l = labels_.at(idx);
  return "y(" + std::to_string(l.a) + "," + std::to_string(l.n) + ")";
}

int monomial_weight(const LabelSet& vars, const Monomial& m) {
  int w = 0;
  for (const auto& [v, e] : m) w += vars.weight(v) * e;
  return w;
}

// ---------------------------------------------------------------- FockPoly

FockPoly FockPoly::one(const LabelSet* vars, int cap, unsigned conductor) {
  FockPoly p(vars, cap);
  p.add_term({}, Num::one(conductor));
  return p;
}

FockPoly FockPoly::variable(const LabelSet* vars, int cap, Label l,
                            unsigned conductor) {
  FockPoly p(vars, cap);
  p.add_term({{vars->index(l), 1}}, Num::one(conductor));
  return p;
}

void FockPoly::add_term(const Monomial& m, const Num& c) {
  if (c.is_zero()) return;
  if (monomial_weight(*vars_, m) > cap_) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

FockPoly FockPoly::operator+(const FockPoly& o) const {
  FockPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

FockPoly FockPoly::operator-(const FockPoly& o) const {
  FockPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

FockPoly FockPoly::operator*(const Num& c) const { return scale_num(*this, c); }

FockPoly FockPoly::mul(const FockPoly& o) const {
  FockPoly r(vars_, cap_);
  for (const auto& [m1, c1] : terms_) {
    const int w1 = monomial_weight(*vars_, m1);
    for (const auto& [m2, c2] : o.terms_) {
      if (w1 + monomial_weight(*vars_, m2) > cap_) continue;
      r.add_term(merge_monomials(m1, m2), c1 * c2);
    }
  }
  return r;
}

std::string FockPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (const auto& [v, e] : m) {
      os << "*" << vars_->var_name(v);
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

FockPoly mul_variable(const FockPoly& p, int var_idx) {
  FockPoly r(&p.vars(), p.cap());
  const Monomial unit{{var_idx, 1}};
  for (const auto& [m, c] : p.terms())
    r.add_term(merge_monomials(m, unit), c);
  return r;
}

FockPoly diff_variable(const FockPoly& p, int var_idx) {
  FockPoly r(&p.vars(), p.cap());
  for (const auto& [m, c] : p.terms()) {
    for (size_t k = 0; k < m.size(); ++k) {
      if (m[k].first != var_idx) continue;
      Monomial d = m;
      if (d[k].second == 1) {
        d.erase(d.begin() + static_cast<long>(k));
      } else {
        d[k].second -= 1;
      }
      r.add_term(d, c * Rational(m[k].second));
      break;
    }
  }
  return r;
}

std::function<FockPoly(const FockPoly&)> heisenberg_action(Label l, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("heisenberg_action: sign must be +-1");
  return [l, sign](const FockPoly& p) {
    const int idx = p.vars().index(l);
    if (sign > 0) return diff_variable(p, idx);
    FockPoly q = mul_variable(p, idx);
    if (q.is_zero()) return q;
    const unsigned L = q.terms().begin()->second.conductor();
    return q * Num::rational(p.vars().weight(idx), L);
  };
}

std::map<int, FockPoly> euler_grading(const FockPoly& p) {
  std::map<int, FockPoly> out;
  for (const auto& [m, c] : p.terms()) {
    const int w = monomial_weight(p.vars(), m);
    auto it = out.find(w);
    if (it == out.end())
      it = out.emplace(w, FockPoly(&p.vars(), p.cap())).first;
    it->second.add_term(m, c);
  }
  return out;
}

// ------------------------------------------------------------ apply_vertex

LaurentBlock apply_vertex(const coeffs::BetaTable& beta, int i, int sign,
                          const FockPoly& p, int W) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("apply_vertex: sign must be +-1");
  const LabelSet* vars = &p.vars();
  std::vector<Num> mcoef, dcoef;
  vertex_coefficients(*vars, beta, i, sign, &mcoef, &dcoef);

  LaurentBlock block;
  for (const auto& [b, piece] : euler_grading(p)) {
    // derivative exponential first; it only lowers weight, so cap b
    FockPoly work(vars, b);
    for (const auto& [m, c] : piece.terms()) work.add_term(m, c);
    FockPoly lowered = exp_apply(work, dcoef, /*deriv=*/true);
    // components above W can only rise further under multiplication
    FockPoly trimmed(vars, W);
    for (const auto& [m, c] : lowered.terms()) trimmed.add_term(m, c);
    FockPoly raised = exp_apply(trimmed, mcoef, /*deriv=*/false);
    // regrade: the zeta^q slice of a weight-b input is the weight-(b+q) part
    for (const auto& [w, comp] : euler_grading(raised))
      block_accumulate(&block, w - b, comp);
  }
  return block;
}

// --------------------------------------------------------------- ope_check

namespace {

void enumerate_monomials(const LabelSet& vars, int idx, int remaining,
                         Monomial* cur, std::vector<Monomial>* out) {
  if (idx == vars.size()) {
    out->push_back(*cur);
    return;
  }
  enumerate_monomials(vars, idx + 1, remaining, cur, out);
  const int w = vars.weight(idx);
  for (int e = 1; e * w <= remaining; ++e) {
    cur->push_back({idx, e});
    enumerate_monomials(vars, idx + 1, remaining - e * w, cur, out);
    cur->pop_back();
  }
}

using Bidegree = std::pair<int, int>;  // (zeta power, w power)
using BidegreeMap = std::map<Bidegree, FockPoly>;

void bidegree_accumulate(BidegreeMap* out, Bidegree key, const FockPoly& comp) {
  auto it = out->find(key);
  if (it == out->end()) {
    out->emplace(key, comp);
  } else {
    it->second = it->second + comp;
  }
}

/**
 * One exponential stage of a two-variable operator product applied across a
 * bidegree-sliced state.  Each slice is weight-homogeneous, so its weight
 * shift under the stage is the power of the stage's formal variable.
 */
BidegreeMap apply_stage(const BidegreeMap& in, const std::vector<Num>& coef,
                        bool deriv, bool zeta_var) {
  BidegreeMap out;
  for (const auto& [key, poly] : in) {
    if (poly.is_zero()) continue;
    const int b = homogeneous_weight(poly);
    FockPoly full = exp_apply(poly, coef, deriv);
    for (const auto& [w, comp] : euler_grading(full)) {
      const int shift = w - b;
      Bidegree nk = zeta_var ? Bidegree{key.first + shift, key.second}
                             : Bidegree{key.first, key.second + shift};
      bidegree_accumulate(&out, nk, comp);
    }
  }
  return out;
}

std::string bidegree_str(const Bidegree& k) {
  return "(p,q)=(" + std::to_string(k.first) + "," +
         std::to_string(k.second) + ")";
}

}  // namespace

OpeReport ope_check(const rootsys::CoxeterData& cox,
                    const coeffs::BetaTable& beta, int i, int W, int K) {
  if (W < 1 || K < W)
    throw std::invalid_argument("ope_check: need 1 <= W <= K");
  const unsigned L = beta.conductor;
  LabelSet vars(cox, K);

  // B_i expanded to order K, lifted from Q(zeta_h) into the beta conductor
  coeffs::BSeries bser = coeffs::b_series_product(cox, i, K);
  std::vector<Num> blift;
  blift.reserve(bser.size());
  for (const auto& c : bser) blift.push_back(c.lift(L));

  // per-stage coefficient vectors (signs as in the normal-ordered product)
  std::vector<Num> mult_pos, deriv_pos, mult_neg, deriv_neg;
  vertex_coefficients(vars, beta, i, +1, &mult_pos, &deriv_pos);
  vertex_coefficients(vars, beta, i, -1, &mult_neg, &deriv_neg);

  std::vector<Monomial> basis;
  {
    Monomial cur;
    enumerate_monomials(vars, 0, W, &cur, &basis);
  }

  OpeReport rep;
  rep.monomials = static_cast<int>(basis.size());
  for (const Monomial& mono : basis) {
    const int b = monomial_weight(vars, mono);
    FockPoly v(&vars, K);
    v.add_term(mono, Num::one(L));

    // LHS: Gamma^{-alpha_i}(w) then Gamma^{alpha_i}(zeta)
    BidegreeMap lhs;
    for (const auto& [q, inner] : apply_vertex(beta, i, -1, v, K))
      for (const auto& [p, outer] : apply_vertex(beta, i, +1, inner, K))
        bidegree_accumulate(&lhs, {p, q}, outer);

    // RHS: normal order, right to left: D_w, D_zeta, M_w, M_zeta
    BidegreeMap no;
    {
      BidegreeMap state;
      state.emplace(Bidegree{0, 0}, v);
      state = apply_stage(state, deriv_neg, true, /*zeta_var=*/false);
      state = apply_stage(state, deriv_pos, true, /*zeta_var=*/true);
      state = apply_stage(state, mult_neg, false, /*zeta_var=*/false);
      state = apply_stage(state, mult_pos, false, /*zeta_var=*/true);
      no = std::move(state);
    }

    // compare every matchable bidegree
    for (int q = -b; q <= K - b; ++q) {
      for (int p = -(b + q); b + p + q <= K; ++p) {
        ++rep.compared;
        FockPoly rhs(&vars, K);
        for (int j = 0; j <= q + b; ++j) {
          auto it = no.find({p + j, q - j});
          if (it == no.end()) continue;
          rhs = rhs + scale_num(it->second, blift[j]);
        }
        auto lt = lhs.find({p, q});
        const FockPoly* lp = lt == lhs.end() ? nullptr : &lt->second;
        if (!poly_equal(lp, &rhs)) {
          ++rep.mismatched;
          if (rep.first_mismatch.empty()) {
            FockPoly mv(&vars, K);
            mv.add_term(mono, Num::one(L));
            rep.first_mismatch = "i=" + std::to_string(i + 1) +
                                 " monomial " + mv.str() + " " +
                                 bidegree_str({p, q});
          }
        }
      }
    }
  }
  rep.pass = rep.mismatched == 0;
  return rep;
}

// --------------------------------------------------------- TensorFockPoly

void TensorFockPoly::add_term(const TensorMonomial& m, const Num& c) {
  if (c.is_zero()) return;
  if (total_weight(m) > cap_) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int TensorFockPoly::total_weight(const TensorMonomial& m) const {
  return monomial_weight(*vars_, m.left) + monomial_weight(*vars_, m.right);
}

namespace {

std::string tensor_side_str(const LabelSet& vars, const Monomial& m,
                            char mark) {
  if (m.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, e] : m) {
    if (!first) os << "*";
    first = false;
    Label l = vars.label(v);
    os << "y" << mark << "(" << l.a << "," << l.n << ")";
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

std::string tensor_term_str(const LabelSet& vars, const TensorMonomial& m,
                            const Num& c) {
  return c.str() + " * " + tensor_side_str(vars, m.left, '\'') + " (x) " +
         tensor_side_str(vars, m.right, '"');
}

}  // namespace

std::string TensorFockPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << tensor_term_str(*vars_, m, c);
  }
  return os.str();
}

std::string TensorFockPoly::leading_term() const {
  if (terms_.empty()) return "0";
  const auto& [m, c] = *terms_.begin();
  return tensor_term_str(*vars_, m, c);
}

// ---------------------------------------------------------- hirota engine

HirotaResidual hirota_residual(const rootsys::CoxeterData& cox,
                               const std::vector<Num>& a,
                               const coeffs::BetaTable& beta,
                               const FockPoly& tau, int W) {
  if (W < 1) throw std::invalid_argument("hirota_residual: W >= 1");
  if (static_cast<int>(a.size()) != cox.rank)
    throw std::invalid_argument("hirota_residual: rank mismatch");
  const LabelSet* vars = &tau.vars();
  const unsigned L = beta.conductor;

  std::vector<Num> alift;
  alift.reserve(a.size());
  for (const auto& x : a) alift.push_back(x.lift(L));

  TensorFockPoly residual(vars, W);

  // LHS: Res_zeta zeta^{-1} sum_i a_i Gamma^{+}(zeta) tau (x) Gamma^{-}(zeta) tau
  for (int i = 0; i < cox.rank; ++i) {
    std::map<Monomial, LaurentBlock> plus, minus;
    for (const auto& [m, c] : tau.terms()) {
      (void)c;
      FockPoly mono(vars, W);
      mono.add_term(m, Num::one(L));
      if (plus.find(m) == plus.end())
        plus.emplace(m, apply_vertex(beta, i, +1, mono, W));
      if (minus.find(m) == minus.end())
        minus.emplace(m, apply_vertex(beta, i, -1, mono, W));
    }
    for (const auto& [m1, c1] : tau.terms()) {
      const int b1 = monomial_weight(*vars, m1);
      const LaurentBlock& F = plus.at(m1);
      for (const auto& [m2, c2] : tau.terms()) {
        if (b1 + monomial_weight(*vars, m2) > W) continue;  // weight preserved
        const LaurentBlock& G = minus.at(m2);
        const Num scale = alift[i] * c1 * c2;
        for (const auto& [p, fp] : F) {
          auto gq = G.find(-p);
          if (gq == G.end()) continue;
          for (const auto& [ml, cl] : fp.terms())
            for (const auto& [mr, cr] : gq->second.terms())
              residual.add_term({ml, mr}, scale * cl * cr);
        }
      }
    }
  }

  // minus RHS: target (tau (x) tau) + h^{-1} sum_l wt(l)(y'-y'')(d'-d'')
  const Rational target = coeffs::target_sum(cox);
  const Rational inv_h = make_q(1, cox.h);
  for (const auto& [m1, c1] : tau.terms()) {
    for (const auto& [m2, c2] : tau.terms()) {
      const Num base = c1 * c2;
      residual.add_term({m1, m2}, -(base * target));
      // y'd' and y''d'' are diagonal; the cross terms move one variable
      for (int v = 0; v < vars->size(); ++v) {
        const int w = vars->weight(v);
        int e1 = 0, e2 = 0;
        for (const auto& [vv, ee] : m1)
          if (vv == v) e1 = ee;
        for (const auto& [vv, ee] : m2)
          if (vv == v) e2 = ee;
        if (e1 + e2 == 0) continue;
        const Rational wq = Rational(w) * inv_h;
        residual.add_term({m1, m2}, -(base * (wq * Rational(e1 + e2))));
        const Monomial unit{{v, 1}};
        if (e2 > 0) {
          Monomial m2d = m2;
          for (auto& [vv, ee] : m2d)
            if (vv == v) --ee;
          m2d.erase(std::remove_if(m2d.begin(), m2d.end(),
                                   [](const auto& t) { return t.second == 0; }),
                    m2d.end());
          residual.add_term({merge_monomials(m1, unit), m2d},
                            base * (wq * Rational(e2)));
        }
        if (e1 > 0) {
          Monomial m1d = m1;
          for (auto& [vv, ee] : m1d)
            if (vv == v) --ee;
          m1d.erase(std::remove_if(m1d.begin(), m1d.end(),
                                   [](const auto& t) { return t.second == 0; }),
                    m1d.end());
          residual.add_term({m1d, merge_monomials(m2, unit)},
                            base * (wq * Rational(e1)));
        }
      }
    }
  }

  HirotaResidual out;
  out.weight_cap = W;
  out.certified_weight = W;
  for (const auto& [m, c] : residual.terms()) {
    const int w = residual.total_weight(m);
    auto it = out.nonzero_components.find(w);
    if (it == out.nonzero_components.end())
      it = out.nonzero_components.emplace(w, TensorFockPoly(vars, W)).first;
    it->second.add_term(m, c);
  }
  out.zero_to_certified = out.nonzero_components.empty();
  out.first_nonzero_weight =
      out.zero_to_certified ? -1 : out.nonzero_components.begin()->first;
  return out;
}

FockPoly tau_one_soliton(const LabelSet& vars, const coeffs::BetaTable& beta,
                         int i, const Rational& z0, const Rational& c,
                         int W) {
  const unsigned L = beta.conductor;
  FockPoly s(&vars, W);
  for (int v = 0; v < vars.size(); ++v) {
    const int w = vars.weight(v);
    if (w > W) continue;
    Rational zp(1);
    for (int t = 0; t < w; ++t) zp *= z0;
    s.add_term({{v, 1}}, beta.pos(i, vars.label(v).a - 1) * zp);
  }
  FockPoly expo = FockPoly::one(&vars, W, L);
  FockPoly term = expo;
  for (long order = 1; !term.is_zero(); ++order) {
    term = scale_rational(term.mul(s), make_q(1, order));
    if (term.is_zero()) break;
    expo = expo + term;
  }
  return FockPoly::one(&vars, W, L) + scale_rational(expo, c);
}

// ----------------------------------------------------- variable dictionary

mpz_class rescale_factor(const LabelSet& vars, Label l) {
  const int m = vars.exponent(l.a);
  mpz_class f = 1;
  for (int r = 0; r <= l.n; ++r) f *= m + r * vars.h();
  return f;
}

namespace {

FockPoly rescale_impl(const FockPoly& p, bool invert) {
  const LabelSet& vars = p.vars();
  FockPoly r(&vars, p.cap());
  for (const auto& [m, c] : p.terms()) {
    mpz_class f = 1;
    for (const auto& [v, e] : m) {
      mpz_class base = rescale_factor(vars, vars.label(v));
      for (int t = 0; t < e; ++t) f *= base;
    }
    Rational q = invert ? Rational(f) : Rational(1) / Rational(f);
    q.canonicalize();
    r.add_term(m, c * q);
  }
  return r;
}

}  // namespace

FockPoly rescale_to_singularity_variables(const FockPoly& p) {
  return rescale_impl(p, false);
}

FockPoly unrescale_from_singularity_variables(const FockPoly& p) {
  return rescale_impl(p, true);
}

// ----------------------------------------------------------------- parser

namespace {

struct TauParser {
  const LabelSet& vars;
  unsigned conductor;
  std::string s;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("tau polynomial: " + what + " at position " +
                                std::to_string(pos));
  }

  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }

  long read_int() {
    size_t start = pos;
    while (!done() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected an integer");
    return std::stol(s.substr(start, pos - start));
  }

  /** integer or p/q */
  Rational read_number() {
    long num = read_int();
    if (peek() == '/') {
      ++pos;
      long den = read_int();
      if (den == 0) fail("zero denominator");
      return make_q(num, den);
    }
    return Rational(num);
  }

  /** y(a,n)[^e] -> (variable index, exponent) */
  std::pair<int, int> read_variable() {
    ++pos;  // 'y'
    if (peek() != '(') fail("expected '(' after y");
    ++pos;
    long a = read_int();
    if (peek() != ',') fail("expected ',' in y(a,n)");
    ++pos;
    long n = read_int();
    if (peek() != ')') fail("expected ')' in y(a,n)");
    ++pos;
    if (a < 1 || a > vars.rank()) fail("label index a out of range");
    auto idx = vars.find(Label{static_cast<int>(a), static_cast<int>(n)});
    if (!idx) fail("variable outside the label set");
    int e = 1;
    if (peek() == '^') {
      ++pos;
      e = static_cast<int>(read_int());
      if (e < 1) fail("exponent must be >= 1");
    }
    return {*idx, e};
  }

  FockPoly parse(int W) {
    FockPoly out(&vars, W);
    if (done()) fail("empty input");
    while (true) {
      int sign = 1;
      while (peek() == '+' || peek() == '-') {
        if (peek() == '-') sign = -sign;
        ++pos;
      }
      Rational coeff(sign);
      std::map<int, int> exps;
      bool first_factor = true;
      while (true) {
        if (peek() == 'y') {
          auto [v, e] = read_variable();
          exps[v] += e;
        } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
          coeff *= read_number();
        } else if (first_factor) {
          fail("expected a factor");
        } else {
          fail("expected a factor after '*'");
        }
        first_factor = false;
        if (peek() != '*') break;
        ++pos;
      }
      Monomial m(exps.begin(), exps.end());
      if (monomial_weight(vars, m) > W)
        fail("term exceeds the weight cap");
      out.add_term(m, Num::rational(coeff, conductor));
      if (done()) break;
      if (peek() != '+' && peek() != '-') fail("expected '+' between terms");
    }
    return out;
  }
};

}  // namespace

FockPoly parse_tau_poly(const LabelSet& vars, unsigned conductor,
                        const std::string& body, int W) {
  TauParser p{vars, conductor, {}};
  for (char ch : body)
    if (!std::isspace(static_cast<unsigned char>(ch))) p.s.push_back(ch);
  return p.parse(W);
}

}  // namespace adeh::fock
