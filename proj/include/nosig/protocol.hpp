#pragma once

// Pseudo-sifting and the Alice-Bob-Eve tripartite tables induced by an
// extremal decomposition. Bob announces nothing; Alice announces x, and Bob
// corrects b -> b - xy so that correlations always mean b = a. Eve's symbol
// records what she can infer from the strategy she supplied.

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "correlations.hpp"

namespace nosig {

enum class EveKind { Full, Partial, None };

// Eve's knowledge per round: (a,b) full, (a,?) hesitation among two Bob
// values, or (?,?) nothing. b is meaningful only for Full.
struct EveSymbol {
    EveKind kind = EveKind::None;
    int a = 0;
    int b = 0;

    static EveSymbol full(int a, int b) { return {EveKind::Full, a, b}; }
    static EveSymbol partial(int a) { return {EveKind::Partial, a, 0}; }
    static EveSymbol none() { return {EveKind::None, 0, 0}; }

    std::string encode(int d) const {
        switch (kind) {
            case EveKind::Full:
                return "F:" + std::to_string(a) + ":" + std::to_string(b);
            case EveKind::Partial:
                return (d == 2 ? "A:" : "A2:") + std::to_string(a);
            default: return "N";
        }
    }

    auto operator<=>(const EveSymbol&) const = default;
};

inline EveSymbol decode_eve_symbol(const std::string& s) {
    if (s == "N") return EveSymbol::none();
    if (s.rfind("F:", 0) == 0) {
        auto colon = s.find(':', 2);
        if (colon == std::string::npos)
            throw std::runtime_error("decode_eve_symbol: bad full symbol " + s);
        return EveSymbol::full(std::stoi(s.substr(2, colon - 2)),
                               std::stoi(s.substr(colon + 1)));
    }
    if (s.rfind("A2:", 0) == 0) return EveSymbol::partial(std::stoi(s.substr(3)));
    if (s.rfind("A:", 0) == 0) return EveSymbol::partial(std::stoi(s.substr(2)));
    throw std::runtime_error("decode_eve_symbol: unknown symbol " + s);
}

// ---------------------------------------------------------------------------

// Per-x conditional P(a,b|x) after the pseudo-sifting b -> b - xy, averaged
// over Bob's setting with P(y=1) = xi.
struct SiftedDistribution {
    int d = 2;
    double xi = 0.5;
    std::vector<std::vector<double>> px0, px1;  // [a][b]

    const std::vector<std::vector<double>>& table(int x) const {
        return x == 0 ? px0 : px1;
    }

    double error_rate(int x) const {
        double e = 0.0;
        const auto& t = table(x);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                if (a != b) e += t[a][b];
        return e;
    }

    // e_AB(Delta) averaged over x
    std::vector<double> delta_profile() const {
        std::vector<double> e(d, 0.0);
        for (int x = 0; x < 2; ++x)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) e[mod(a - b, d)] += 0.5 * table(x)[a][b];
        return e;
    }
};

inline SiftedDistribution pseudo_sift(const CorrelationTable& t, double xi = 0.5) {
    if (xi < 0.0 || xi > 1.0) throw std::invalid_argument("pseudo_sift: xi must be in [0,1]");
    const int d = t.d();
    SiftedDistribution s;
    s.d = d;
    s.xi = xi;
    s.px0.assign(d, std::vector<double>(d, 0.0));
    s.px1 = s.px0;
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < d; ++a)
            for (int bp = 0; bp < d; ++bp) {
                double v = (1.0 - xi) * t.at(a, bp, x, 0) + xi * t.at(a, mod(bp + x, d), x, 1);
                (x == 0 ? s.px0 : s.px1)[a][bp] = v;
            }
    return s;
}

inline SiftedDistribution pseudo_sift(const EveDecomposition& dec, double xi = 0.5) {
    return pseudo_sift(dec.recombine(), xi);
}

// ---------------------------------------------------------------------------

// Joint P(a, b, e | x). Entries accumulate exactly from closed-form weights,
// never from sampling.
class TripartiteTable {
public:
    struct Entry {
        int x, a, b;
        EveSymbol e;
        double p;
    };

    TripartiteTable(int d, double xi) : d_(d), xi_(xi) {}

    int d() const { return d_; }
    double xi() const { return xi_; }

    void add(int x, int a, int b, const EveSymbol& e, double w) {
        if (w == 0.0) return;
        map_[std::make_tuple(x, a, b, e)] += w;
    }

    double prob(int x, int a, int b, const EveSymbol& e) const {
        auto it = map_.find(std::make_tuple(x, a, b, e));
        return it == map_.end() ? 0.0 : it->second;
    }

    std::vector<Entry> entries() const {
        std::vector<Entry> v;
        for (const auto& [k, p] : map_)
            v.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k), p});
        return v;
    }

    std::vector<EveSymbol> symbols() const {
        std::vector<EveSymbol> v;
        for (const auto& [k, p] : map_) {
            (void)p;
            const EveSymbol& e = std::get<3>(k);
            if (std::find(v.begin(), v.end(), e) == v.end()) v.push_back(e);
        }
        return v;
    }

    // P(a,b|x) with Eve traced out
    std::vector<std::vector<double>> sifted(int x) const {
        std::vector<std::vector<double>> t(d_, std::vector<double>(d_, 0.0));
        for (const auto& [k, p] : map_)
            if (std::get<0>(k) == x) t[std::get<1>(k)][std::get<2>(k)] += p;
        return t;
    }

    double eve_marginal(int x, const EveSymbol& e) const {
        double s = 0.0;
        for (const auto& [k, p] : map_)
            if (std::get<0>(k) == x && std::get<3>(k) == e) s += p;
        return s;
    }

    void write_csv(std::ostream& os) const {
        os << "x,a,b,eve_symbol,probability\n";
        char buf[64];
        for (const auto& [k, p] : map_) {
            std::snprintf(buf, sizeof buf, "%.12g", p);
            os << std::get<0>(k) << "," << std::get<1>(k) << "," << std::get<2>(k) << ","
               << std::get<3>(k).encode(d_) << "," << buf << "\n";
        }
    }

private:
    int d_;
    double xi_;
    std::map<std::tuple<int, int, int, EveSymbol>, double> map_;
};

// Sift-and-classify construction. For each local strategy and announced x,
// Bob's corrected symbol is b(y) - xy; if both settings give the same value
// Eve knows Bob's symbol, otherwise she hesitates between the two. The
// nonlocal component always sifts to b = a and tells Eve nothing.
inline TripartiteTable build_tripartite(const EveDecomposition& dec, double xi = 0.5) {
    const int d = dec.d;
    if (d != 2 && d != 3)
        throw std::domain_error("build_tripartite: explicit tables only for d in {2,3}");
    TripartiteTable t(d, xi);
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < d; ++a) t.add(x, a, a, EveSymbol::none(), dec.p_nl / d);
    for (const auto& ws : dec.locals) {
        if (ws.weight == 0.0) continue;
        const auto& s = ws.strategy;
        for (int x = 0; x < 2; ++x) {
            int a = s.a(x);
            int bp0 = s.b(0);                // y=0: no correction
            int bp1 = mod(s.b(1) - x, d);    // y=1: b -> b - x
            if (bp0 == bp1) {
                t.add(x, a, bp0, EveSymbol::full(a, bp0), ws.weight);
            } else {
                t.add(x, a, bp0, EveSymbol::partial(a), (1.0 - xi) * ws.weight);
                t.add(x, a, bp1, EveSymbol::partial(a), xi * ws.weight);
            }
        }
    }
    return t;
}

// Independent flips a -> a+1 (probability qA) and b -> b+1 (probability qB);
// Eve's symbol keeps its pre-flip labels.
inline TripartiteTable preprocess_tripartite(const TripartiteTable& t, double qA, double qB) {
    if (t.d() != 2) throw std::domain_error("preprocess_tripartite: requires d = 2");
    if (qA < 0.0 || qA > 0.5 || qB < 0.0 || qB > 0.5)
        throw std::invalid_argument("preprocess_tripartite: flip probabilities in [0,1/2]");
    TripartiteTable out(t.d(), t.xi());
    for (const auto& en : t.entries())
        for (int fa = 0; fa < 2; ++fa)
            for (int fb = 0; fb < 2; ++fb) {
                double w = (fa ? qA : 1.0 - qA) * (fb ? qB : 1.0 - qB);
                out.add(en.x, en.a ^ fa, en.b ^ fb, en.e, en.p * w);
            }
    return out;
}

// ---------------------------------------------------------------------------
// Entropic functionals on tripartite tables (bits)

namespace detail {
inline double plog2p(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }
}

// H(B|E,x) in bits
inline double conditional_entropy_b_given_e(const TripartiteTable& t, int x) {
    double h = 0.0;
    for (const auto& e : t.symbols()) {
        double pe = t.eve_marginal(x, e);
        if (pe <= 0.0) continue;
        for (int b = 0; b < t.d(); ++b) {
            double pbe = 0.0;
            for (int a = 0; a < t.d(); ++a) pbe += t.prob(x, a, b, e);
            h += pe * detail::plog2p(pbe / pe);
        }
    }
    return h;
}

// I(A:B|E) at announced setting x, in bits
inline double conditional_mutual_information(const TripartiteTable& t, int x) {
    const int d = t.d();
    double info = 0.0;
    for (const auto& e : t.symbols()) {
        double pe = t.eve_marginal(x, e);
        if (pe <= 0.0) continue;
        std::vector<double> pa(d, 0.0), pb(d, 0.0);
        std::vector<std::vector<double>> pab(d, std::vector<double>(d, 0.0));
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double v = t.prob(x, a, b, e) / pe;
                pab[a][b] = v;
                pa[a] += v;
                pb[b] += v;
            }
        double i = 0.0;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                if (pab[a][b] > 0.0)
                    i += pab[a][b] * std::log2(pab[a][b] / (pa[a] * pb[b]));
        info += pe * i;
    }
    return info;
}

// Left and right sides of H(B|E,x) = 1 - 2 e_{AB|x'}, x' the other setting.
struct UncertaintyRelation {
    double h_b_given_e;
    double one_minus_2e;
};

inline UncertaintyRelation uncertainty_relation(const TripartiteTable& t, int x) {
    if (t.d() != 2) throw std::domain_error("uncertainty_relation: requires d = 2");
    double h = conditional_entropy_b_given_e(t, x);
    int other = 1 - x;
    double e = 0.0;
    auto sift = t.sifted(other);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            if (a != b) e += sift[a][b];
    return {h, 1.0 - 2.0 * e};
}

// Dense joint P(a,b,e) at announced x, for the channel minimization. The
// symbol order is returned alongside the array.
struct JointABE {
    int d = 2;
    std::vector<EveSymbol> symbols;
    std::vector<std::vector<std::vector<double>>> p;  // [a][b][e]
};

inline JointABE to_joint(const TripartiteTable& t, int x = 0) {
    JointABE j;
    j.d = t.d();
    j.symbols = t.symbols();
    j.p.assign(j.d, std::vector<std::vector<double>>(
                        j.d, std::vector<double>(j.symbols.size(), 0.0)));
    for (std::size_t k = 0; k < j.symbols.size(); ++k)
        for (int a = 0; a < j.d; ++a)
            for (int b = 0; b < j.d; ++b) j.p[a][b][k] = t.prob(x, a, b, j.symbols[k]);
    return j;
}

}  // namespace nosig
