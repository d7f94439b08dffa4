#pragma once

#include <iosfwd>
#include <vector>

#include "bfem/asymptotics.hpp"
#include "bfem/bessel.hpp"
#include "bfem/dirac.hpp"
#include "bfem/io.hpp"

namespace bfem {

// Schema names written into the header "# schema:" line.
inline constexpr const char* kSchemaBands = "bands/1";
inline constexpr const char* kSchemaOracle = "oracle/1";
inline constexpr const char* kSchemaBracketing = "bracketing/1";
inline constexpr const char* kSchemaTransition = "dirac-scan/1";
inline constexpr const char* kSchemaVelocity = "velocity/1";
inline constexpr const char* kSchemaAsymptotics = "asymptotics/1";
inline constexpr const char* kSchemaTe = "te/1";

// value,z,p,q,multiplicity,satisfies_S,first_index
void write_oracle_csv(std::ostream& os, const std::vector<DiscSpectrumEntry>& spectrum, double R0,
                      const OutputHeader& h);

// g,n,kx,ky,neumann,bloch,dirichlet,holds
void write_bracketing_csv(std::ostream& os, const std::vector<std::pair<double, BracketResult>>& rows,
                          const OutputHeader& h);

// g,lambda1K,lambda2K,lambda3K,label_simple_branch
void write_transition_csv(std::ostream& os, const std::vector<BranchData>& rows, const OutputHeader& h);

// g,v_formula,v_cone,g_times_v
void write_velocity_csv(std::ostream& os, const std::vector<VdRow>& rows, const OutputHeader& h);

// g,lambda_D,prediction_M0,prediction_M1,residual_M0,residual_M1,eta_M0,eta_M1,l2_dev,h1_dev,l2_dev_B,h1_dev_B
void write_asymptotics_csv(std::ostream& os, const HighContrastStudy& s, const OutputHeader& h);

// arclength,kx,ky,omega_1..omega_n from a band table
void write_te_csv(std::ostream& os, const BandTable& t, double c, const OutputHeader& h);

// Reads a table written by write_band_csv (header lines skipped, g taken from "# g:").
BandTable read_band_csv(std::istream& is);

}  // namespace bfem
