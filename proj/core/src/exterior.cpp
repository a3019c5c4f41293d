#include "liefield/exterior.hpp"

#include <algorithm>
#include <cmath>

namespace liefield {

int sort_with_sign(std::vector<std::uint16_t>& idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j]) return 0;
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    }
    return sign;
}

AlgebroidForm AlgebroidForm::function(std::size_t rank, const Expr& f) {
    AlgebroidForm w(rank, 0);
    w.add({}, f);
    return w;
}

AlgebroidForm AlgebroidForm::basis(std::size_t rank, std::size_t index) {
    AlgebroidForm w(rank, 1);
    w.add({static_cast<std::uint16_t>(index)}, Expr(1));
    return w;
}

AlgebroidForm AlgebroidForm::one_form(std::size_t rank, const std::vector<Expr>& coeffs) {
    if (coeffs.size() != rank) throw ShapeError("one-form has wrong number of coefficients");
    AlgebroidForm w(rank, 1);
    for (std::size_t A = 0; A < rank; ++A) w.add({static_cast<std::uint16_t>(A)}, coeffs[A]);
    return w;
}

Expr AlgebroidForm::coefficient(const MultiIndex& idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? Expr(0) : it->second;
}

void AlgebroidForm::add(const std::vector<std::uint16_t>& idx, const Expr& coeff) {
    if (idx.size() != degree_) throw ShapeError("monomial degree does not match form degree");
    if (coeff.is_zero()) return;
    MultiIndex key = idx;
    for (auto i : key) {
        if (i >= rank_) throw ShapeError("basis index out of range");
    }
    const int sign = sort_with_sign(key);
    if (sign == 0) return;
    auto it = terms_.find(key);
    const Expr c = sign > 0 ? coeff : -coeff;
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
}

AlgebroidForm& AlgebroidForm::operator+=(const AlgebroidForm& o) {
    if (o.is_zero()) return *this;
    if (rank_ == 0 && degree_ == 0 && terms_.empty()) {
        rank_ = o.rank_;
        degree_ = o.degree_;
    }
    if (o.degree_ != degree_ || o.rank_ != rank_) throw ShapeError("adding forms of different degree or rank");
    for (const auto& [k, v] : o.terms_) add(k, v);
    return *this;
}

AlgebroidForm& AlgebroidForm::operator-=(const AlgebroidForm& o) { return *this += -o; }

AlgebroidForm AlgebroidForm::operator-() const {
    AlgebroidForm out(rank_, degree_);
    for (const auto& [k, v] : terms_) out.terms_.emplace(k, -v);
    return out;
}

AlgebroidForm operator*(const Expr& f, const AlgebroidForm& w) {
    AlgebroidForm out(w.rank_, w.degree_);
    if (f.is_zero()) return out;
    for (const auto& [k, v] : w.terms_) out.add(k, f * v);
    return out;
}

AlgebroidForm AlgebroidForm::map_coefficients(const std::function<Expr(const Expr&)>& fn) const {
    AlgebroidForm out(rank_, degree_);
    for (const auto& [k, v] : terms_) out.add(k, fn(v));
    return out;
}

AlgebroidForm wedge(const AlgebroidForm& a, const AlgebroidForm& b) {
    if (a.rank() != b.rank()) throw ShapeError("wedge of forms over different bases");
    AlgebroidForm out(a.rank(), a.degree() + b.degree());
    for (const auto& [I, f] : a.terms()) {
        for (const auto& [J, g] : b.terms()) {
            MultiIndex K = I;
            K.insert(K.end(), J.begin(), J.end());
            out.add(K, f * g);
        }
    }
    return out;
}

namespace {

class Differentiator {
public:
    explicit Differentiator(const AnchoredBasisSpec& spec) : spec_(spec) {
        const std::size_t R = spec.rank;
        de_.reserve(R);
        for (std::size_t g = 0; g < R; ++g) {
            AlgebroidForm w(R, 2);
            for (std::size_t A = 0; A < R; ++A)
                for (std::size_t B = A + 1; B < R; ++B) {
                    const Expr& ab = spec.C(A, B, g);
                    const Expr& ba = spec.C(B, A, g);
                    // de^g = -1/2 C^g_{AB} e^A ^ e^B, antisymmetrised over (A, B)
                    const Expr c = structurally_equal(ba, -ab) ? -ab : -((ab - ba) / Expr(2));
                    w.add({static_cast<std::uint16_t>(A), static_cast<std::uint16_t>(B)}, c);
                }
            de_.push_back(std::move(w));
        }
    }

    AlgebroidForm d_function(const Expr& f) const {
        AlgebroidForm out(spec_.rank, 1);
        if (f.is_constant()) return out;
        std::vector<Expr> partial(spec_.ncoords());
        for (std::size_t j = 0; j < spec_.ncoords(); ++j) partial[j] = diff(f, spec_.coords[j]);
        for (std::size_t A = 0; A < spec_.rank; ++A) {
            Expr v;
            for (std::size_t j = 0; j < spec_.ncoords(); ++j) {
                if (partial[j].is_zero() || spec_.anchor(A, j).is_zero()) continue;
                v += spec_.anchor(A, j) * partial[j];
            }
            out.add({static_cast<std::uint16_t>(A)}, v);
        }
        return out;
    }

    const AlgebroidForm& d_monomial(const MultiIndex& I) {
        auto it = cache_.find(I);
        if (it != cache_.end()) return it->second;
        AlgebroidForm result(spec_.rank, I.size() + 1);
        if (!I.empty()) {
            AlgebroidForm head = AlgebroidForm::basis(spec_.rank, I.front());
            MultiIndex rest(I.begin() + 1, I.end());
            AlgebroidForm rest_form(spec_.rank, rest.size());
            rest_form.add(rest, Expr(1));
            result = wedge(de_[I.front()], rest_form);
            result -= wedge(head, d_monomial(rest));
        }
        return cache_.emplace(I, std::move(result)).first->second;
    }

private:
    const AnchoredBasisSpec& spec_;
    std::vector<AlgebroidForm> de_;
    std::map<MultiIndex, AlgebroidForm> cache_;
};

}  // namespace

AlgebroidForm differential(const AnchoredBasisSpec& spec, const AlgebroidForm& w) {
    if (w.rank() != spec.rank) throw ShapeError("form rank does not match basis rank");
    Differentiator d(spec);
    AlgebroidForm out(spec.rank, w.degree() + 1);
    for (const auto& [I, f] : w.terms()) {
        AlgebroidForm mono(spec.rank, I.size());
        mono.add(I, Expr(1));
        out += wedge(d.d_function(f), mono);
        const AlgebroidForm& dI = d.d_monomial(I);
        if (!dI.is_zero()) out += f * dI;
    }
    return out;
}

AlgebroidForm contraction(const SectionExpr& s, const AlgebroidForm& w) {
    if (s.size() != w.rank()) throw ShapeError("section length does not match form rank");
    if (w.degree() == 0) return AlgebroidForm(w.rank(), 0);
    AlgebroidForm out(w.rank(), w.degree() - 1);
    for (const auto& [I, f] : w.terms()) {
        for (std::size_t k = 0; k < I.size(); ++k) {
            const Expr& sk = s[I[k]];
            if (sk.is_zero()) continue;
            MultiIndex J;
            J.reserve(I.size() - 1);
            for (std::size_t m = 0; m < I.size(); ++m)
                if (m != k) J.push_back(I[m]);
            const Expr c = sk * f;
            out.add(J, (k % 2 == 0) ? c : -c);
        }
    }
    return out;
}

AlgebroidForm lie_derivative(const AnchoredBasisSpec& spec, const SectionExpr& s, const AlgebroidForm& w) {
    AlgebroidForm out = contraction(s, differential(spec, w));
    if (w.degree() > 0) out += differential(spec, contraction(s, w));
    return out;
}

Expr apply(const AlgebroidForm& w, const std::vector<SectionExpr>& vectors) {
    if (vectors.size() != w.degree()) throw ShapeError("number of vectors does not match form degree");
    AlgebroidForm cur = w;
    for (const auto& v : vectors) cur = contraction(v, cur);
    return cur.coefficient({});
}

double max_abs_coefficient(const AlgebroidForm& w, const VarLayout& layout, std::span<const double> point) {
    double m = 0.0;
    for (const auto& [I, f] : w.terms()) m = std::max(m, std::abs(CompiledExpr(f, layout)(point)));
    return m;
}

namespace {
std::map<std::string, Expr> base_bindings(const BundleMapExpr& phi, const AnchoredBasisSpec& target) {
    if (phi.base.size() != target.ncoords()) throw ShapeError("bundle map base has wrong length");
    std::map<std::string, Expr> b;
    for (std::size_t i = 0; i < target.ncoords(); ++i) b.emplace(target.coords[i], phi.base[i]);
    return b;
}
}  // namespace

AlgebroidForm pullback(const BundleMapExpr& phi, const AnchoredBasisSpec& target, const AlgebroidForm& w) {
    if (phi.fiber.rank() != 2 || phi.fiber.dim(0) != target.rank) throw ShapeError("bundle map fibre has wrong shape");
    const std::size_t src_rank = phi.fiber.dim(1);
    const auto bindings = base_bindings(phi, target);
    std::vector<AlgebroidForm> pulled;
    for (std::size_t b = 0; b < target.rank; ++b) {
        std::vector<Expr> row(src_rank);
        for (std::size_t a = 0; a < src_rank; ++a) row[a] = phi.fiber(b, a);
        pulled.push_back(AlgebroidForm::one_form(src_rank, row));
    }
    AlgebroidForm out(src_rank, w.degree());
    for (const auto& [J, f] : w.terms()) {
        AlgebroidForm term = AlgebroidForm::function(src_rank, substitute(f, bindings));
        for (auto j : J) term = wedge(term, pulled[j]);
        out += term;
    }
    return out;
}

Tensor<Expr> admissibility_residual(const BundleMapExpr& phi, const AnchoredBasisSpec& src,
                                    const AnchoredBasisSpec& tgt) {
    const auto bindings = base_bindings(phi, tgt);
    Tensor<Expr> out({src.rank, tgt.ncoords()});
    for (std::size_t a = 0; a < src.rank; ++a)
        for (std::size_t i = 0; i < tgt.ncoords(); ++i) {
            Expr v = anchor_derivative(src, a, phi.base[i]);
            for (std::size_t b = 0; b < tgt.rank; ++b) {
                if (phi.fiber(b, a).is_zero()) continue;
                v -= substitute(tgt.anchor(b, i), bindings) * phi.fiber(b, a);
            }
            out(a, i) = v;
        }
    return out;
}

Tensor<Expr> morphism_residual(const BundleMapExpr& phi, const AnchoredBasisSpec& src, const AnchoredBasisSpec& tgt) {
    const auto bindings = base_bindings(phi, tgt);
    const std::size_t R = src.rank, T = tgt.rank;
    Tensor<Expr> Ct({T, T, T});
    for (std::size_t i = 0; i < Ct.size(); ++i) Ct.flat(i) = substitute(tgt.C.flat(i), bindings);
    Tensor<Expr> out({T, R, R});
    for (std::size_t b = 0; b < T; ++b)
        for (std::size_t a = 0; a < R; ++a)
            for (std::size_t d = 0; d < R; ++d) {
                Expr v = anchor_derivative(src, a, phi.fiber(b, d)) - anchor_derivative(src, d, phi.fiber(b, a));
                for (std::size_t t = 0; t < T; ++t) {
                    if (phi.fiber(t, a).is_zero()) continue;
                    for (std::size_t s = 0; s < T; ++s) {
                        if (phi.fiber(s, d).is_zero() || Ct(t, s, b).is_zero()) continue;
                        v += Ct(t, s, b) * phi.fiber(t, a) * phi.fiber(s, d);
                    }
                }
                for (std::size_t g = 0; g < R; ++g) {
                    if (phi.fiber(b, g).is_zero() || src.C(a, d, g).is_zero()) continue;
                    v -= phi.fiber(b, g) * src.C(a, d, g);
                }
                out(b, a, d) = v;
            }
    return out;
}

Tensor<double> evaluate(const Tensor<Expr>& t, const VarLayout& layout, std::span<const double> point) {
    Tensor<double> out(t.shape());
    for (std::size_t i = 0; i < t.size(); ++i) out.flat(i) = CompiledExpr(t.flat(i), layout)(point);
    return out;
}

}  // namespace liefield
