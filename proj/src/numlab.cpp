#include "orbispace/numlab.hpp"

#include "orbispace/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>

namespace orbi::lab {

namespace {

Eigen::MatrixXd to_eigen(const FloatMatrix& m) {
    Eigen::MatrixXd out(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) out(i, j) = m[i][j];
    return out;
}

FloatMatrix zeros(std::size_t n) { return FloatMatrix(n, std::vector<double>(n, 0.0)); }

}  // namespace

FloatMatrix materialize(const rep::RepSpec& spec, const rep::MonomialElement& g) {
    std::size_t nlines = spec.lines();
    std::size_t dim = spec.real_dim();
    FloatMatrix m = zeros(dim);
    for (std::size_t j = 0; j < nlines; ++j) {
        double angle = 2.0 * std::numbers::pi * to_double(g.rot[j]);
        double c = std::cos(angle), s = std::sin(angle);
        // rotation composed with conjugation acting first
        double k = g.conj[j] ? -1.0 : 1.0;
        std::size_t r = 2 * g.perm[j], q = 2 * j;
        m[r][q] = c;
        m[r][q + 1] = -s * k;
        m[r + 1][q] = s;
        m[r + 1][q + 1] = c * k;
    }
    for (std::size_t i = 0; i < spec.v0_dim; ++i)
        for (std::size_t j = 0; j < spec.v0_dim; ++j)
            m[2 * nlines + i][2 * nlines + j] = to_double(g.v0_block.at(i, j));
    return m;
}

std::size_t float_rank(const FloatMatrix& m) {
    if (m.empty()) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > kRankTol) ++rank;
    return rank;
}

double orthogonality_defect(const rep::RepSpec& spec, const FloatMatrix& m) {
    std::size_t nlines = spec.lines();
    std::size_t dim = spec.real_dim();
    if (dim == 0) return 0.0;
    Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(dim, dim);
    for (std::size_t i = 0; i < spec.v0_dim; ++i)
        for (std::size_t j = 0; j < spec.v0_dim; ++j)
            gram(2 * nlines + i, 2 * nlines + j) = to_double(spec.v0_gram.at(i, j));
    Eigen::MatrixXd em = to_eigen(m);
    return (em.transpose() * gram * em - gram).cwiseAbs().maxCoeff();
}

FloatMatrix float_product(const FloatMatrix& a, const FloatMatrix& b) {
    Eigen::MatrixXd p = to_eigen(a) * to_eigen(b);
    FloatMatrix out(p.rows(), std::vector<double>(p.cols()));
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index j = 0; j < p.cols(); ++j) out[i][j] = p(i, j);
    return out;
}

double max_abs_diff(const FloatMatrix& a, const FloatMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
    return worst;
}

TorImage tor_quotient_map(const std::vector<std::complex<double>>& z, const std::vector<Int>& a) {
    if (z.size() != a.size() || z.size() < 2)
        throw Error(ErrorCode::InvalidInput, "tor quotient map needs n >= 2 coordinates");
    TorImage out;
    out.radial.resize(z.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        out.radial[i] = std::norm(z[i]);
        mean += out.radial[i];
    }
    mean /= static_cast<double>(z.size());
    for (double& r : out.radial) r -= mean;
    out.monomial = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        long e = a[i].convert_to<long>();
        for (long t = 0; t < e; ++t) out.monomial *= z[i];
    }
    return out;
}

Quaternion quaternion_multiply(const Quaternion& a, const Quaternion& b) {
    return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Quaternion quaternion_conjugate(const Quaternion& q) { return {q[0], -q[1], -q[2], -q[3]}; }

Quaternion quaternion_map(const Quaternion& v) {
    Quaternion i{0.0, 1.0, 0.0, 0.0};
    return quaternion_multiply(quaternion_multiply(v, i), quaternion_conjugate(v));
}

namespace {

rep::MonomialElement random_element(const rep::RepSpec& spec, CounterRng& rng) {
    rep::MonomialElement g = rep::identity_element(spec);
    if (!spec.generators.empty()) {
        std::size_t len = rng.next_below(4);
        for (std::size_t t = 0; t < len; ++t)
            g = rep::compose(g, spec.generators[rng.next_below(spec.generators.size())]);
    }
    // torus translate: rotations from a random algebra point
    std::vector<Rat> x(spec.m);
    for (auto& v : x) v = Rat(Int(rng.next_range(-8, 8)), Int(rng.next_range(1, 8)));
    std::vector<Rat> delta(spec.lines());
    for (std::size_t j = 0; j < spec.lines(); ++j) {
        Rat acc = 0;
        for (std::size_t i = 0; i < spec.m; ++i)
            acc += Rat(spec.weights.items[j][i]) * x[i];
        delta[j] = mod1(acc);
    }
    return rep::compose(g, rep::torus_element(spec, delta));
}

}  // namespace

std::vector<LabCheck> verify_suite(const rep::RepSpec& spec, std::uint64_t seed,
                                   std::size_t trials) {
    std::vector<LabCheck> out;

    {
        LabCheck check{"homomorphism", trials, 0.0, false};
        for (std::size_t t = 0; t < trials; ++t) {
            CounterRng rng(seed, 1000 + t);
            auto g = random_element(spec, rng);
            auto h = random_element(spec, rng);
            auto lhs = materialize(spec, rep::compose(g, h));
            auto rhs = float_product(materialize(spec, g), materialize(spec, h));
            check.max_defect = std::max(check.max_defect, max_abs_diff(lhs, rhs));
        }
        check.pass = check.max_defect < kAlgebraTol;
        out.push_back(check);
    }

    {
        LabCheck check{"orthogonality", trials, 0.0, false};
        for (std::size_t t = 0; t < trials; ++t) {
            CounterRng rng(seed, 2000 + t);
            auto g = random_element(spec, rng);
            check.max_defect =
                std::max(check.max_defect, orthogonality_defect(spec, materialize(spec, g)));
        }
        for (const auto& g : spec.generators)
            check.max_defect =
                std::max(check.max_defect, orthogonality_defect(spec, materialize(spec, g)));
        check.pass = check.max_defect < kAlgebraTol;
        out.push_back(check);
    }

    {
        LabCheck check{"exact_float_rank", trials, 0.0, false};
        std::size_t mismatches = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            CounterRng rng(seed, 3000 + t);
            auto g = random_element(spec, rng);
            auto info = rep::omega_invariants(spec, g);
            FloatMatrix m = materialize(spec, g);
            for (std::size_t i = 0; i < m.size(); ++i) m[i][i] -= 1.0;
            for (auto& row : m)
                for (auto& v : row) v = -v;
            if (float_rank(m) != info.rk_e_minus_g) ++mismatches;
        }
        check.max_defect = static_cast<double>(mismatches);
        check.pass = mismatches == 0;
        out.push_back(check);
    }

    {
        // invariance of the diagonal-subtorus quotient data under the subtorus
        std::size_t n = std::max<std::size_t>(2, spec.lines());
        std::vector<Int> a(n, 1);
        LabCheck check{"tor_map_invariance", trials, 0.0, false};
        for (std::size_t t = 0; t < trials; ++t) {
            CounterRng rng(seed, 4000 + t);
            std::vector<std::complex<double>> z(n);
            for (auto& v : z)
                v = {rng.next_unit() * 4.0 - 2.0, rng.next_unit() * 4.0 - 2.0};
            // subtorus point: phases summing (with exponents) to an integer
            std::vector<double> phi(n);
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                phi[i] = rng.next_unit();
                acc += static_cast<double>(a[i].convert_to<long>()) * phi[i];
            }
            phi[n - 1] = -acc / static_cast<double>(a[n - 1].convert_to<long>());
            std::vector<std::complex<double>> hz(n);
            for (std::size_t i = 0; i < n; ++i)
                hz[i] = z[i] * std::polar(1.0, 2.0 * std::numbers::pi * phi[i]);
            TorImage img1 = tor_quotient_map(z, a);
            TorImage img2 = tor_quotient_map(hz, a);
            double defect = std::abs(img1.monomial - img2.monomial);
            for (std::size_t i = 0; i < n; ++i)
                defect = std::max(defect, std::abs(img1.radial[i] - img2.radial[i]));
            check.max_defect = std::max(check.max_defect, defect);
        }
        check.pass = check.max_defect < kAlgebraTol;
        out.push_back(check);
    }

    {
        LabCheck real_part{"quaternion_real_part", trials, 0.0, false};
        LabCheck norm_mult{"quaternion_norm", trials, 0.0, false};
        for (std::size_t t = 0; t < trials; ++t) {
            CounterRng rng(seed, 5000 + t);
            Quaternion v;
            for (auto& x : v) x = rng.next_unit() * 4.0 - 2.0;
            Quaternion img = quaternion_map(v);
            real_part.max_defect = std::max(real_part.max_defect, std::abs(img[0]));
            double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
            double ni = std::sqrt(img[0] * img[0] + img[1] * img[1] + img[2] * img[2] +
                                  img[3] * img[3]);
            norm_mult.max_defect = std::max(norm_mult.max_defect, std::abs(ni - n2));
        }
        real_part.pass = real_part.max_defect < 1e-12;
        norm_mult.pass = norm_mult.max_defect < 1e-9;
        out.push_back(real_part);
        out.push_back(norm_mult);
    }

    {
        // orbit separation: points with equal quotient data lie on one orbit,
        // witnessed by a 10^4-point grid over the one-parameter subtorus
        LabCheck check{"tor_map_separation", trials, 0.0, false};
        std::vector<Int> a{1, 2};
        for (std::size_t t = 0; t < trials; ++t) {
            CounterRng rng(seed, 6000 + t);
            std::vector<std::complex<double>> z(2);
            for (auto& v : z)
                v = {rng.next_unit() * 0.75 + 0.05, rng.next_unit() * 0.75 + 0.05};
            double s = rng.next_unit();
            // h = (e^{-4 pi i s}, e^{2 pi i s}) satisfies l1 * l2^2 = 1
            std::vector<std::complex<double>> hz{
                z[0] * std::polar(1.0, -4.0 * std::numbers::pi * s),
                z[1] * std::polar(1.0, 2.0 * std::numbers::pi * s)};
            TorImage img1 = tor_quotient_map(z, a);
            TorImage img2 = tor_quotient_map(hz, a);
            double map_dist = std::abs(img1.monomial - img2.monomial);
            for (std::size_t i = 0; i < 2; ++i)
                map_dist = std::max(map_dist, std::abs(img1.radial[i] - img2.radial[i]));
            if (map_dist >= 1e-10) continue;
            double best = 1e100;
            for (int gpt = 0; gpt < 10000; ++gpt) {
                double u = static_cast<double>(gpt) / 10000.0;
                std::complex<double> l2 = std::polar(1.0, 2.0 * std::numbers::pi * u);
                std::complex<double> l1 = std::polar(1.0, -4.0 * std::numbers::pi * u);
                double d = std::hypot(std::abs(z[0] - l1 * hz[0]), std::abs(z[1] - l2 * hz[1]));
                best = std::min(best, d);
            }
            check.max_defect = std::max(check.max_defect, best);
        }
        check.pass = check.max_defect < kSeparationTol;
        out.push_back(check);
    }

    return out;
}

}  // namespace orbi::lab
