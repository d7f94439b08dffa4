#include "bfem/tables.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bfem/config.hpp"

namespace bfem {

void write_oracle_csv(std::ostream& os, const std::vector<DiscSpectrumEntry>& spectrum, double R0,
                      const OutputHeader& h)
{
    write_header(os, h);
    write_columns(os, {"value", "z", "p", "q", "multiplicity", "satisfies_S", "first_index"});
    for (const auto& e : spectrum)
        write_row(os, {e.value, std::sqrt(e.value) * R0, double(e.p), double(e.q), double(e.multiplicity),
                       e.satisfies_S ? 1.0 : 0.0, double(e.first_index)});
}

void write_bracketing_csv(std::ostream& os, const std::vector<std::pair<double, BracketResult>>& rows,
                          const OutputHeader& h)
{
    write_header(os, h);
    write_columns(os, {"g", "n", "kx", "ky", "neumann", "bloch", "dirichlet", "holds"});
    for (const auto& [g, b] : rows)
        write_row(os, {g, double(b.n), b.k.x(), b.k.y(), b.neumann, b.bloch, b.dirichlet, b.holds ? 1.0 : 0.0});
}

void write_transition_csv(std::ostream& os, const std::vector<BranchData>& rows, const OutputHeader& h)
{
    write_header(os, h);
    write_columns(os, {"g", "lambda1K", "lambda2K", "lambda3K", "label_simple_branch"});
    for (const auto& b : rows) {
        os << format_double(b.g);
        for (int i = 0; i < 3; ++i) os << ',' << format_double(b.lambda.at(i));
        os << ',' << sector_name(b.one_label) << '\n';
    }
}

void write_velocity_csv(std::ostream& os, const std::vector<VdRow>& rows, const OutputHeader& h)
{
    write_header(os, h);
    write_columns(os, {"g", "v_formula", "v_cone", "g_times_v"});
    for (const auto& r : rows) write_row(os, {r.g, r.v_formula, r.v_cone, r.g_times_v});
}

void write_asymptotics_csv(std::ostream& os, const HighContrastStudy& s, const OutputHeader& h)
{
    write_header(os, h);
    os << "# delta: " << format_double(s.delta) << '\n';
    os << "# lambda1: " << format_double(s.lambda1) << '\n';
    write_columns(os, {"g", "lambda_D", "prediction_M0", "prediction_M1", "residual_M0", "residual_M1", "eta_M0",
                       "eta_M1", "l2_dev", "h1_dev", "l2_dev_B", "h1_dev_B"});
    for (const auto& r : s.rows)
        write_row(os, {r.g, r.lambda_D, r.prediction_M0, r.prediction_M1, r.residual_M0, r.residual_M1, r.eta_M0,
                       r.eta_M1, r.l2_dev, r.h1_dev, r.l2_dev_B, r.h1_dev_B});
}

void write_te_csv(std::ostream& os, const BandTable& t, double c, const OutputHeader& h)
{
    write_header(os, h);
    os << "# g: " << format_double(t.g) << '\n';
    std::vector<std::string> cols{"arclength", "kx", "ky"};
    for (int n = 1; n <= t.nbands; ++n) cols.push_back("omega_" + std::to_string(n));
    write_columns(os, cols);
    // roundoff can leave the k = 0 ground state marginally negative
    const double floor = -1e-9 * std::max(1.0, t.bands.cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        std::vector<double> row{t.samples[i].arclength, t.samples[i].k.x(), t.samples[i].k.y()};
        for (int n = 0; n < t.nbands; ++n) {
            const double lam = t.bands(static_cast<Eigen::Index>(i), n);
            row.push_back(te_frequency(lam >= floor ? std::max(0.0, lam) : lam, t.g, c));
        }
        write_row(os, row);
    }
}

BandTable read_band_csv(std::istream& is)
{
    BandTable t;
    std::string line;
    bool have_g = false, have_cols = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# g:", 0) == 0) {
                t.g = std::stod(line.substr(4));
                have_g = true;
            }
            continue;
        }
        if (!have_cols) {
            if (line.rfind("arclength,kx,ky", 0) != 0) throw std::runtime_error("read_band_csv: unexpected column header");
            t.nbands = static_cast<int>(std::count(line.begin(), line.end(), ',')) - 2;
            have_cols = true;
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != t.nbands + 3) throw std::runtime_error("read_band_csv: ragged row");
        rows.push_back(row);
    }
    if (!have_g || !have_cols) throw std::runtime_error("read_band_csv: missing '# g:' line or column header");
    t.bands.resize(static_cast<Eigen::Index>(rows.size()), t.nbands);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        t.samples.push_back({Vec2(rows[i][1], rows[i][2]), rows[i][0]});
        for (int n = 0; n < t.nbands; ++n) t.bands(static_cast<Eigen::Index>(i), n) = rows[i][3 + n];
    }
    return t;
}

}  // namespace bfem
