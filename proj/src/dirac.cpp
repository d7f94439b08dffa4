#include "bfem/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace bfem {

std::optional<Degeneracy> detect_degeneracy(const std::vector<double>& lambda, double tol_rel)
{
    const int nb = static_cast<int>(lambda.size());
    if (nb < 3) throw std::invalid_argument("detect_degeneracy: need at least three bands");
    auto close = [&](int i, double tol) { return std::abs(lambda[i + 1] - lambda[i]) < tol * std::abs(lambda[i]); };
    for (int i = 0; i + 1 < nb; ++i) {
        if (!close(i, tol_rel)) continue;
        Degeneracy d;
        d.n = i + 1;
        d.gap_rel = std::abs(lambda[i + 1] - lambda[i]) / std::abs(lambda[i]);
        int last = i + 1;
        while (last + 1 < nb && close(last, tol_rel)) ++last;
        const double sep = 10.0 * tol_rel;
        const bool lower_tight = i > 0 && close(i - 1, sep);
        const bool upper_tight = last + 1 < nb && close(last, sep);
        if (last > i + 1 || lower_tight || upper_tight) {
            d.triple = true;
            d.lambda_D = std::accumulate(lambda.begin() + i, lambda.begin() + last + 1, 0.0) / (last - i + 1);
            return d;
        }
        if (last + 1 >= nb) return std::nullopt;  // isolation from above cannot be verified
        d.lambda_D = 0.5 * (lambda[i] + lambda[i + 1]);
        return d;
    }
    return std::nullopt;
}

std::optional<Degeneracy> detect_degeneracy(const Mesh& mesh, double g, const Vec2& K, int nbands, double tol_rel,
                                            const SolverOptions& opt)
{
    if (nbands < 3) throw std::invalid_argument("detect_degeneracy: nbands must be >= 3");
    return detect_degeneracy(bands_at_k(mesh, g, K, nbands, false, opt).lambda, tol_rel);
}

DiracBasis dirac_basis(const Mesh& mesh, const BandsAtK& bands, int n, const Vec2& K)
{
    if (n < 1 || n + 1 > bands.vectors.cols()) throw std::invalid_argument("dirac_basis: pair index out of range");
    const SymmetryAction rot = build_rotation_action(mesh, K);
    const SymmetryAction pc = build_pc_action(mesh, K);
    const CMat cluster = bands.vectors.middleCols(n - 1, 2);
    DiracBasis d;
    d.n = n;
    d.lambda_D = 0.5 * (bands.lambda[n - 1] + bands.lambda[n]);
    d.cluster_labels = classify_cluster(cluster, rot, bands.M);
    d.phi1 = project_symmetry(cluster, rot, bands.M, SectorLabel::Tau);
    d.phi2 = pc.apply(d.phi1);
    d.c1 = classify(d.phi1, rot, bands.M);
    d.c2 = classify(d.phi2, rot, bands.M);
    d.overlap = std::abs(d.phi2.dot(bands.M * d.phi1));
    return d;
}

VelocityIntegrals dirac_velocity(const Mesh& mesh, const DofMap& dofs, double g, const CVec& phi1, const CVec& phi2)
{
    const TriangleRule rule = triangle_rule(mesh.order == 2 ? 4 : 2);
    const RegionWeights sigma = sigma_weights(g);
    const auto u1 = expand_to_nodes(dofs, phi1);
    const auto u2 = expand_to_nodes(dofs, phi2);
    VelocityIntegrals out;
    out.I.setZero();
    out.W.setZero();
    double N[6];
    Vec2 dN[6];
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ElementBasis eb = element_basis(mesh, e);
        const int* c = mesh.element(e);
        const double s = sigma[static_cast<int>(mesh.region[e])];
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            eb.values(rule.points[q], N);
            eb.gradients(rule.points[q], dN);
            cplx a = 0, b = 0;
            CVec2 da = CVec2::Zero(), db = CVec2::Zero();
            for (int i = 0; i < eb.nloc; ++i) {
                a += N[i] * u1[c[i]];
                b += N[i] * u2[c[i]];
                da += dN[i].cast<cplx>() * u1[c[i]];
                db += dN[i].cast<cplx>() * u2[c[i]];
            }
            const double w = s * rule.weights[q] * eb.area;
            out.I += w * b * da.conjugate();
            out.W += w * a * db.conjugate();
        }
    }
    const cplx i(0.0, 1.0);
    out.v_formula = std::abs(out.I[0] - i * out.I[1]);
    out.literal = std::abs(out.W[0] - i * out.W[1]);
    return out;
}

std::vector<Vec2> probe_directions(int count)
{
    std::vector<Vec2> d;
    for (int j = 0; j < count; ++j) {
        const double th = kPi / 12.0 + 2.0 * kPi * j / count;
        d.emplace_back(std::cos(th), std::sin(th));
    }
    return d;
}

ConeFit cone_fit(const Mesh& mesh, double g, const Vec2& K, int n, double lambda_D, const std::vector<Vec2>& directions,
                 double h, const SolverOptions& opt)
{
    if (directions.size() < 6) throw std::invalid_argument("cone_fit: need at least six directions");
    if (!(h > 0)) throw std::invalid_argument("cone_fit: step must be positive");
    ConeFit f;
    f.h = h;
    f.directions = directions;
    for (const Vec2& d : directions) {
        double up[2], lo[2];
        for (int s = 0; s < 2; ++s) {
            const double step = s == 0 ? h : 0.5 * h;
            const auto b = bands_at_k(mesh, g, K + step * d.normalized(), n + 2, false, opt);
            up[s] = (b.lambda[n] - lambda_D) / step;
            lo[s] = (lambda_D - b.lambda[n - 1]) / step;
        }
        const double ru = 2.0 * up[1] - up[0], rl = 2.0 * lo[1] - lo[0];
        if (std::abs(ru - up[1]) > 0.3 * std::abs(ru) || std::abs(rl - lo[1]) > 0.3 * std::abs(rl))
            f.step_warning = true;
        f.upper.push_back(ru);
        f.lower.push_back(rl);
    }
    auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
    f.mean_upper = mean(f.upper);
    f.mean_lower = mean(f.lower);
    f.mean = 0.5 * (f.mean_upper + f.mean_lower);
    std::vector<double> all = f.upper;
    all.insert(all.end(), f.lower.begin(), f.lower.end());
    const auto [mn, mx] = std::minmax_element(all.begin(), all.end());
    f.isotropy_dev = (*mx - *mn) / f.mean;
    f.updown_dev = std::abs(f.mean_upper - f.mean_lower) / f.mean;
    return f;
}

DiracReport dirac_report(const Mesh& mesh, double g, int nbands, bool with_cone, const SolverOptions& opt)
{
    const Vec2 K = vertex_points(mesh.basis).first;
    const BandsAtK b = bands_at_k(mesh, g, K, std::max(nbands, 3), true, opt);
    DiracReport r;
    r.g = g;
    const auto deg = detect_degeneracy(b.lambda);
    if (!deg || deg->triple) return r;
    r.n = deg->n;
    r.lambda_D = deg->lambda_D;
    r.degeneracy_gap = deg->gap_rel;
    const DiracBasis db = dirac_basis(mesh, b, deg->n, K);
    r.labels = {sector_name(db.c1.label), sector_name(db.c2.label)};
    const auto v = dirac_velocity(mesh, b.dofs, g, db.phi1, db.phi2);
    r.v_formula = v.v_formula;
    r.v_literal = v.literal;
    r.passed_nondegeneracy = v.v_formula > 0;
    if (with_cone) {
        const ConeFit f = cone_fit(mesh, g, K, deg->n, deg->lambda_D, probe_directions(6), 1e-3 * K.norm(), opt);
        r.v_cone = f.upper;
        r.v_cone.insert(r.v_cone.end(), f.lower.begin(), f.lower.end());
        r.v_cone_mean = f.mean;
        r.isotropy_dev = f.isotropy_dev;
    }
    return r;
}

std::string to_json(const DiracReport& r)
{
    nlohmann::json j;
    j["g"] = r.g;
    j["band_index"] = r.n;
    j["lambda_D"] = r.lambda_D;
    j["degeneracy_gap"] = r.degeneracy_gap;
    j["labels"] = r.labels;
    j["v_formula"] = r.v_formula;
    j["v_literal_contraction"] = r.v_literal;
    j["v_cone"] = r.v_cone;
    j["v_cone_mean"] = r.v_cone_mean;
    j["isotropy_dev"] = r.isotropy_dev;
    j["passed_nondegeneracy"] = r.passed_nondegeneracy;
    return j.dump(2);
}

BranchData branches_at_K(const Mesh& mesh, double g, const SolverOptions& opt)
{
    const Vec2 K = vertex_points(mesh.basis).first;
    const BandsAtK b = bands_at_k(mesh, g, K, 4, true, opt);
    const SymmetryAction rot = build_rotation_action(mesh, K);
    BranchData d;
    d.g = g;
    d.lambda.assign(b.lambda.begin(), b.lambda.begin() + 3);
    // weight of each eigenvector in the 1-sector
    int one = 0;
    double best = -1;
    for (int i = 0; i < 3; ++i) {
        const CVec p = sector_projector(b.vectors.col(i), rot, SectorLabel::One);
        const double w = std::abs(p.dot(b.M * p));
        if (w > best) {
            best = w;
            one = i;
        }
    }
    d.one_index = one + 1;
    d.lambda_one = b.lambda[one];
    CMat pair(b.vectors.rows(), 2);
    int c = 0;
    double sum = 0;
    for (int i = 0; i < 3; ++i)
        if (i != one) {
            pair.col(c++) = b.vectors.col(i);
            sum += b.lambda[i];
        }
    d.lambda_pair = 0.5 * sum;
    d.one_label = classify(b.vectors.col(one), rot, b.M).label;
    for (const auto& cl : classify_cluster(pair, rot, b.M)) d.pair_labels.push_back(cl.label);
    return d;
}

TransitionResult transition_scan(const Mesh& mesh, double g_lo, double g_hi, double tol, const SolverOptions& opt)
{
    if (!(g_lo > 0) || !(g_hi > g_lo)) throw std::invalid_argument("transition_scan: need 0 < g_lo < g_hi");
    TransitionResult r;
    r.g_lo = g_lo;
    r.g_hi = g_hi;
    auto f = [&](double g) {
        r.history.push_back(branches_at_K(mesh, g, opt));
        return r.history.back().lambda_one - r.history.back().lambda_pair;
    };
    double flo = f(g_lo), fhi = f(g_hi);
    if (flo * fhi > 0) return r;
    r.bracketed = true;
    double lo = g_lo, hi = g_hi;
    while ((hi - lo) > tol * 0.5 * (hi + lo)) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    // final secant step inside the bracket
    r.g_c = lo - flo * (hi - lo) / (fhi - flo);
    const BranchData at = branches_at_K(mesh, r.g_c, opt);
    r.history.push_back(at);
    const auto [mn, mx] = std::minmax_element(at.lambda.begin(), at.lambda.end());
    r.spread_rel = (*mx - *mn) / *mn;
    return r;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired samples");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("loglog_slope: values must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

VdScaling vd_scaling_study(const Mesh& mesh, const std::vector<double>& g_list, bool with_cone, const SolverOptions& opt)
{
    VdScaling s;
    std::vector<double> gs, vs, gv;
    for (double g : g_list) {
        const DiracReport r = dirac_report(mesh, g, 3, with_cone, opt);
        if (r.n == 0) throw std::runtime_error("vd_scaling_study: no isolated Dirac pair at g = " + format_double(g));
        const double cone = with_cone ? r.v_cone_mean : std::numeric_limits<double>::quiet_NaN();
        VdRow row{g, r.lambda_D, r.v_formula, cone, g * r.v_formula};
        s.rows.push_back(row);
        gs.push_back(g);
        vs.push_back(r.v_formula);
        gv.push_back(row.g_times_v);
    }
    s.slope = loglog_slope(gs, vs);
    const auto [mn, mx] = std::minmax_element(gv.begin(), gv.end());
    s.spread_rel = (*mx - *mn) / (std::accumulate(gv.begin(), gv.end(), 0.0) / gv.size());
    s.plateau = gv.back();
    return s;
}

}  // namespace bfem
