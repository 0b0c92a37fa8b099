#include "pairhmm/reference.hpp"

#include "arith.hpp"
#include "pairhmm/prob.hpp"

namespace pairhmm {

DpMatrices forward_reference_matrices(const ReadRecord& read, const Haplotype& hap, int scale_log2) {
  const TransitionProfile tp = build_transitions(read);
  const std::size_t m = read.length();
  const std::size_t n = hap.length();

  DpMatrices dp;
  dp.rows = m + 1;
  dp.cols = n + 1;
  dp.match.assign(dp.rows * dp.cols, 0.0);
  dp.insertion.assign(dp.rows * dp.cols, 0.0);
  dp.deletion.assign(dp.rows * dp.cols, 0.0);

  const double d0 = detail::boundary_deletion<double>(scale_log2, n);
  for (std::size_t j = 0; j <= n; ++j) dp.deletion[j] = d0;

  const auto rbases = read.bases();
  const auto hbases = hap.bases();
  for (std::size_t i = 1; i <= m; ++i) {
    const double err = phred_to_prob(read.base_qual()[i - 1]);
    const double alpha = tp.alpha[i - 1];
    const double beta = tp.beta[i - 1];
    const double delta = tp.delta[i - 1];
    const double epsilon = tp.epsilon[i - 1];
    const double zeta = tp.zeta[i - 1];
    double* Mi = dp.match.data() + i * dp.cols;
    double* Ii = dp.insertion.data() + i * dp.cols;
    double* Di = dp.deletion.data() + i * dp.cols;
    const double* Mp = Mi - dp.cols;
    const double* Ip = Ii - dp.cols;
    const double* Dp = Di - dp.cols;
    for (std::size_t j = 1; j <= n; ++j) {
      const double lambda = emission_probability(rbases[i - 1], hbases[j - 1], err);
      Mi[j] = detail::match_cell(lambda, alpha, beta, Mp[j - 1], Ip[j - 1], Dp[j - 1]);
      Ii[j] = detail::insertion_cell(delta, epsilon, Mp[j], Ip[j]);
      Di[j] = detail::deletion_cell(zeta, epsilon, Mi[j - 1], Di[j - 1]);
    }
  }
  return dp;
}

Score forward_reference(const ReadRecord& read, const Haplotype& hap, int scale_log2) {
  const DpMatrices dp = forward_reference_matrices(read, hap, scale_log2);
  const std::size_t m = read.length();
  double sum = 0.0;
  for (std::size_t j = 1; j < dp.cols; ++j) sum += dp.M(m, j) + dp.I(m, j);
  return detail::finish_score(sum, scale_log2);
}

Score forward_reference_linear_space(const ReadRecord& read, const Haplotype& hap, int scale_log2) {
  const TransitionProfile tp = build_transitions(read);
  const std::size_t m = read.length();
  const std::size_t n = hap.length();

  std::vector<double> m_prev(n + 1, 0.0), i_prev(n + 1, 0.0), d_prev(n + 1, 0.0);
  std::vector<double> m_cur(n + 1, 0.0), i_cur(n + 1, 0.0), d_cur(n + 1, 0.0);
  d_prev.assign(n + 1, detail::boundary_deletion<double>(scale_log2, n));

  const auto rbases = read.bases();
  const auto hbases = hap.bases();
  for (std::size_t i = 1; i <= m; ++i) {
    const double err = phred_to_prob(read.base_qual()[i - 1]);
    const double alpha = tp.alpha[i - 1];
    const double beta = tp.beta[i - 1];
    const double delta = tp.delta[i - 1];
    const double epsilon = tp.epsilon[i - 1];
    const double zeta = tp.zeta[i - 1];
    m_cur[0] = i_cur[0] = d_cur[0] = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double lambda = emission_probability(rbases[i - 1], hbases[j - 1], err);
      m_cur[j] = detail::match_cell(lambda, alpha, beta, m_prev[j - 1], i_prev[j - 1], d_prev[j - 1]);
      i_cur[j] = detail::insertion_cell(delta, epsilon, m_prev[j], i_prev[j]);
      d_cur[j] = detail::deletion_cell(zeta, epsilon, m_cur[j - 1], d_cur[j - 1]);
    }
    m_prev.swap(m_cur);
    i_prev.swap(i_cur);
    d_prev.swap(d_cur);
  }
  double sum = 0.0;
  for (std::size_t j = 1; j <= n; ++j) sum += m_prev[j] + i_prev[j];
  return detail::finish_score(sum, scale_log2);
}

}  // namespace pairhmm
