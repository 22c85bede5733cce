#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pmblue/diagnostics.hpp"
#include "pmblue/estimators.hpp"
#include "pmblue/fisher.hpp"
#include "pmblue/moments.hpp"
#include "pmblue/simulation.hpp"

namespace pmblue {

// 17 significant digits; inf, -inf and nan for non-finite values.
std::string format_number(double v);
double parse_number(const std::string& s);

// Comma-separated, header row first, LF line endings.  Fields never contain
// commas or quotes, so no quoting is done.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
};

void write_csv(std::ostream& out, const CsvTable& t);
CsvTable read_csv(std::istream& in);

// i,j,mu_i,sigma_ij for i <= j.
CsvTable moments_csv(const PartialMaximaMoments& pm);
PartialMaximaMoments moments_from_csv(const CsvTable& t, const std::string& family);

// k,l,m_k,s_kl,d_kl for k <= l.
CsvTable spacing_moments_csv(const SpacingMoments& sm);
SpacingMoments spacing_moments_from_csv(const CsvTable& t, const std::string& family);

// One row per coefficient; the scalar fields repeat on every row.
CsvTable estimators_csv(const std::vector<EstimatorSolution>& sols);
std::vector<EstimatorSolution> estimators_from_csv(const CsvTable& t);

CsvTable ncp_csv(const NcpReport& r);
NcpReport ncp_from_csv(const CsvTable& t);

CsvTable von_mises_csv(const VonMisesProfile& p);
VonMisesProfile von_mises_from_csv(const CsvTable& t);

CsvTable rate_csv(const RateStudy& st);
RateStudy rate_from_csv(const CsvTable& t);

CsvTable fisher_csv(const FisherReport& r);
FisherReport fisher_from_csv(const CsvTable& t);

CsvTable consistency_csv(const std::vector<ConsistencyRow>& rows);
std::vector<ConsistencyRow> consistency_from_csv(const CsvTable& t);

CsvTable monte_carlo_csv(const MonteCarloReport& r);
MonteCarloReport monte_carlo_from_csv(const CsvTable& t);

// replicate,estimate_<label>,...
CsvTable replicate_dump_csv(const MonteCarloReport& r);

}  // namespace pmblue
