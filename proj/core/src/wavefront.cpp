#include "pairhmm/wavefront.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <type_traits>
#include <utility>

#include "arith.hpp"
#include "pairhmm/prob.hpp"

namespace pairhmm {

template <class Real>
PreparedRead<Real>::PreparedRead(const ReadRecord& read, const EngineConfig& cfg)
    : read_length_(read.length()), p_(cfg.p), k_(cfg.k) {
  const std::size_t slots = padded_length();
  if (read_length_ > slots) {
    throw Error(ErrorKind::ConfigTooSmall, "read of length " + std::to_string(read_length_) +
                                               " does not fit configuration " + to_string(cfg));
  }
  const TransitionProfile tp = build_transitions(read);
  const EmissionTable table = build_emission_table(read, slots);

  // Padding positions: alpha = beta = 1 and no gap opening or extension, so
  // padded cells only shift values to the right and never grow.
  alpha_.assign(slots, Real(1));
  beta_.assign(slots, Real(1));
  delta_.assign(slots, Real(0));
  epsilon_.assign(slots, Real(0));
  zeta_.assign(slots, Real(0));
  emission_.assign(kAlphabetSize * slots, Real(1));

  for (std::size_t pos = 0; pos < slots; ++pos) {
    const std::size_t lane = pos / k_;
    const std::size_t col = pos % k_;
    const std::size_t slot = col * p_ + lane;
    if (pos < read_length_) {
      alpha_[slot] = static_cast<Real>(tp.alpha[pos]);
      beta_[slot] = static_cast<Real>(tp.beta[pos]);
      delta_[slot] = static_cast<Real>(tp.delta[pos]);
      epsilon_[slot] = static_cast<Real>(tp.epsilon[pos]);
      zeta_[slot] = static_cast<Real>(tp.zeta[pos]);
    }
    for (Base c : kAlphabet) {
      emission_[index_of(c) * slots + slot] = static_cast<Real>(table.at(c, pos));
    }
  }
}

template <class Real>
std::size_t PreparedRead<Real>::footprint_bytes(const EngineConfig& cfg) noexcept {
  return (5 + kAlphabetSize) * cfg.max_read_length() * sizeof(Real);
}

template <class Real>
WavefrontEngine<Real>::WavefrontEngine(const EngineConfig& cfg)
    : cfg_(cfg), row_stride_(static_cast<std::size_t>(cfg.p) + 1) {
  cfg_.validate();
  const std::size_t p = static_cast<std::size_t>(cfg.p);
  const std::size_t k = static_cast<std::size_t>(cfg.k);
  for (auto* v : {&row_m_, &row_i_, &row_d_}) v->resize(row_stride_ * k);
  for (auto* v : {&seam_m_, &seam_i_, &seam_d_, &diag_m_, &diag_i_, &diag_d_, &left_m_, &left_i_}) v->resize(p);
}

template <class Real>
Score WavefrontEngine<Real>::score(const PreparedRead<Real>& read, const Haplotype& hap, WavefrontStats* stats) {
  if (read.lanes() != cfg_.p || read.columns() != cfg_.k) {
    throw Error(ErrorKind::InvalidConfig, "read was staged for a different lane configuration");
  }
  double acc = 0;
  if constexpr (std::is_same_v<Real, float>) {
    const detail::FlushDenormals flush;
    acc = stats ? run<true>(read, hap, stats) : run<false>(read, hap, nullptr);
  } else {
    acc = stats ? run<true>(read, hap, stats) : run<false>(read, hap, nullptr);
  }
  return detail::finish_score(acc, cfg_.scale_log2);
}

namespace {

// The lane kernels stay out of line: their restrict parameters are what lets
// the lane loops vectorize, and inlining drops that guarantee.
#if defined(__GNUC__)
#define PAIRHMM_KERNEL __attribute__((noinline))
#else
#define PAIRHMM_KERNEL
#endif

template <class Real>
struct EmissionRows {
  const Real* __restrict a;
  const Real* __restrict c;
  const Real* __restrict g;
  const Real* __restrict t;
  const Real* __restrict n;
};

// E[symbol][slot] written as selects so the lane loops vectorize.
template <class Real>
inline Real lookup(const EmissionRows<Real>& em, std::int32_t symbol, std::size_t slot) {
  Real lambda = em.a[slot];
  lambda = symbol == 1 ? em.c[slot] : lambda;
  lambda = symbol == 2 ? em.g[slot] : lambda;
  lambda = symbol == 3 ? em.t[slot] : lambda;
  lambda = symbol == 4 ? em.n[slot] : lambda;
  return lambda;
}

constexpr std::size_t kNarrowLanes = 8;

// First column of every active lane. The left neighbour is the previous
// lane's last column from the last step (the boundary lane for lane 0); the
// diagonal is what that left neighbour was one step earlier, kept in the seam.
template <class Real>
PAIRHMM_KERNEL void first_column(std::size_t lanes, Real* __restrict rm, Real* __restrict ri, Real* __restrict rd,
                  const Real* __restrict from_m, const Real* __restrict from_i, const Real* __restrict from_d,
                  Real* __restrict seam_m, Real* __restrict seam_i, Real* __restrict seam_d, Real* __restrict dm,
                  Real* __restrict di, Real* __restrict dd, Real* __restrict lm, Real* __restrict li,
                  const Real* __restrict alpha, const Real* __restrict beta, const Real* __restrict delta,
                  const Real* __restrict epsilon, const Real* __restrict zeta, const std::int32_t* __restrict symbol,
                  EmissionRows<Real> em) {
  for (std::size_t t = 0; t < lanes; ++t) {
    const Real up_m = rm[t];
    const Real up_i = ri[t];
    const Real up_d = rd[t];
    const Real left_m = from_m[t];
    const Real left_i = from_i[t];
    const Real left_d = from_d[t];
    const Real lambda = lookup(em, symbol[t], t);
    const Real new_m = detail::match_cell(lambda, alpha[t], beta[t], seam_m[t], seam_i[t], seam_d[t]);
    const Real new_i = detail::insertion_cell(delta[t], epsilon[t], left_m, left_i);
    const Real new_d = detail::deletion_cell(zeta[t], epsilon[t], up_m, up_d);
    seam_m[t] = left_m;
    seam_i[t] = left_i;
    seam_d[t] = left_d;
    rm[t] = new_m;
    ri[t] = new_i;
    rd[t] = new_d;
    dm[t] = up_m;
    di[t] = up_i;
    dd[t] = up_d;
    lm[t] = new_m;
    li[t] = new_i;
  }
}

// Columns 1..k-1. Row buffers advance by row_stride per column, staged read
// data by param_stride.
template <class Real>
PAIRHMM_KERNEL void other_columns(std::size_t lanes, std::size_t k, std::size_t row_stride, std::size_t param_stride,
                   Real* __restrict rm, Real* __restrict ri, Real* __restrict rd, Real* __restrict dm,
                   Real* __restrict di, Real* __restrict dd, Real* __restrict lm, Real* __restrict li,
                   const Real* __restrict alpha, const Real* __restrict beta, const Real* __restrict delta,
                   const Real* __restrict epsilon, const Real* __restrict zeta, const std::int32_t* __restrict symbol,
                   EmissionRows<Real> em) {
  for (std::size_t x = 1; x < k; ++x) {
    const std::size_t r = x * row_stride;
    const std::size_t q = x * param_stride;
    for (std::size_t t = 0; t < lanes; ++t) {
      const Real up_m = rm[r + t];
      const Real up_i = ri[r + t];
      const Real up_d = rd[r + t];
      const Real lambda = lookup(em, symbol[t], q + t);
      const Real new_m = detail::match_cell(lambda, alpha[q + t], beta[q + t], dm[t], di[t], dd[t]);
      const Real new_i = detail::insertion_cell(delta[q + t], epsilon[q + t], lm[t], li[t]);
      const Real new_d = detail::deletion_cell(zeta[q + t], epsilon[q + t], up_m, up_d);
      rm[r + t] = new_m;
      ri[r + t] = new_i;
      rd[r + t] = new_d;
      dm[t] = up_m;
      di[t] = up_i;
      dd[t] = up_d;
      lm[t] = new_m;
      li[t] = new_i;
    }
  }
}

// Narrow configurations. Lane count fixed at compile time, running values in
// registers.
template <class Real, std::size_t L>
PAIRHMM_KERNEL void narrow_step(std::size_t lo, std::size_t k, std::size_t row_stride, std::size_t param_stride,
                                Real* __restrict row_m, Real* __restrict row_i, Real* __restrict row_d,
                                Real* __restrict seam_m, Real* __restrict seam_i, Real* __restrict seam_d,
                                const Real* __restrict alpha, const Real* __restrict beta,
                                const Real* __restrict delta, const Real* __restrict epsilon,
                                const Real* __restrict zeta, const std::int32_t* __restrict symbol,
                                const Real* __restrict emission) {
  const std::size_t slots = param_stride * k;
  const std::size_t last = (k - 1) * row_stride;
  Real dm[L], di[L], dd[L], lm[L], li[L];
  const Real* em[L];
#pragma GCC unroll 8
  for (std::size_t u = 0; u < L; ++u) {
    const std::size_t t = lo + u;
    em[u] = emission + static_cast<std::size_t>(symbol[u]) * slots;
    // lane t sits in row slot t + 1, its left neighbour in slot t
    const Real left_m = row_m[last + t];
    const Real left_i = row_i[last + t];
    const Real left_d = row_d[last + t];
    const std::size_t r = t + 1;
    const Real up_m = row_m[r];
    const Real up_i = row_i[r];
    const Real up_d = row_d[r];
    const Real new_m = detail::match_cell(em[u][t], alpha[t], beta[t], seam_m[t], seam_i[t], seam_d[t]);
    const Real new_i = detail::insertion_cell(delta[t], epsilon[t], left_m, left_i);
    const Real new_d = detail::deletion_cell(zeta[t], epsilon[t], up_m, up_d);
    seam_m[t] = left_m;
    seam_i[t] = left_i;
    seam_d[t] = left_d;
    row_m[r] = new_m;
    row_i[r] = new_i;
    row_d[r] = new_d;
    dm[u] = up_m;
    di[u] = up_i;
    dd[u] = up_d;
    lm[u] = new_m;
    li[u] = new_i;
  }
  for (std::size_t x = 1; x < k; ++x) {
#pragma GCC unroll 8
    for (std::size_t u = 0; u < L; ++u) {
      const std::size_t t = lo + u;
      const std::size_t r = x * row_stride + t + 1;
      const std::size_t q = x * param_stride + t;
      const Real up_m = row_m[r];
      const Real up_i = row_i[r];
      const Real up_d = row_d[r];
      const Real new_m = detail::match_cell(em[u][q], alpha[q], beta[q], dm[u], di[u], dd[u]);
      const Real new_i = detail::insertion_cell(delta[q], epsilon[q], lm[u], li[u]);
      const Real new_d = detail::deletion_cell(zeta[q], epsilon[q], up_m, up_d);
      row_m[r] = new_m;
      row_i[r] = new_i;
      row_d[r] = new_d;
      dm[u] = up_m;
      di[u] = up_i;
      dd[u] = up_d;
      lm[u] = new_m;
      li[u] = new_i;
    }
  }
}

template <class Real>
void narrow_dispatch(std::size_t lanes, std::size_t lo, std::size_t k, std::size_t row_stride,
                     std::size_t param_stride, Real* row_m, Real* row_i, Real* row_d, Real* seam_m, Real* seam_i,
                     Real* seam_d, const Real* alpha, const Real* beta, const Real* delta, const Real* epsilon,
                     const Real* zeta, const std::int32_t* symbol, const Real* emission) {
#define PAIRHMM_NARROW(L)                                                                                          \
  narrow_step<Real, L>(lo, k, row_stride, param_stride, row_m, row_i, row_d, seam_m, seam_i, seam_d, alpha, beta, \
                       delta, epsilon, zeta, symbol, emission)
  switch (lanes) {
    case 1: PAIRHMM_NARROW(1); break;
    case 2: PAIRHMM_NARROW(2); break;
    case 3: PAIRHMM_NARROW(3); break;
    case 4: PAIRHMM_NARROW(4); break;
    case 5: PAIRHMM_NARROW(5); break;
    case 6: PAIRHMM_NARROW(6); break;
    case 7: PAIRHMM_NARROW(7); break;
    default: PAIRHMM_NARROW(8); break;
  }
#undef PAIRHMM_NARROW
}

}  // namespace

template <class Real>
template <bool kInstrument>
double WavefrontEngine<Real>::run(const PreparedRead<Real>& read, const Haplotype& hap, WavefrontStats* stats) {
  const std::size_t p = static_cast<std::size_t>(cfg_.p);
  const std::size_t k = static_cast<std::size_t>(cfg_.k);
  const std::size_t n = hap.length();
  const std::size_t m = read.read_length();
  const std::size_t slots = p * k;
  const std::size_t stride = row_stride_;

  // Row buffers: column x of lane t at x * (p + 1) + t + 1. Slot 0 of each
  // column is the boundary lane left of lane 0 (M = I = 0, D = 2^scale / n).
  const Real boundary_d = detail::boundary_deletion<Real>(cfg_.scale_log2, n);
  for (auto* v : {&row_m_, &row_i_, &row_d_, &seam_m_, &seam_i_, &seam_d_}) std::fill(v->begin(), v->end(), Real(0));
  row_d_[(k - 1) * stride] = boundary_d;
  seam_d_[0] = boundary_d;

  // Lane t handles haplotype position s - t at step s. Storing the haplotype
  // reversed makes the symbols of the active lanes one contiguous run.
  const auto hbases = hap.bases();
  hap_reversed_.resize(n);
  for (std::size_t q = 0; q < n; ++q) hap_reversed_[q] = static_cast<std::int32_t>(index_of(hbases[n - 1 - q]));

  const std::size_t owner_lane = (m - 1) / k;
  const std::size_t owner_slot = ((m - 1) % k) * stride + owner_lane + 1;

  Real* rm = row_m_.data() + 1;
  Real* ri = row_i_.data() + 1;
  Real* rd = row_d_.data() + 1;
  const Real* from_m = row_m_.data() + (k - 1) * stride;
  const Real* from_i = row_i_.data() + (k - 1) * stride;
  const Real* from_d = row_d_.data() + (k - 1) * stride;
  const Real* emission = read.emission().data();
  const EmissionRows<Real> em{emission, emission + slots, emission + 2 * slots, emission + 3 * slots,
                              emission + 4 * slots};

  Real acc = 0;
  const std::size_t total_steps = n + p;
  for (std::size_t s = 0; s < total_steps; ++s) {
    if constexpr (kInstrument) ++stats->steps;

    // Active lanes satisfy 1 <= s - t <= n; they form one contiguous range.
    const std::size_t lo = s > n ? s - n : 0;
    const std::size_t hi_excl = std::min(p, s);
    if (lo >= hi_excl) continue;
    const std::size_t lanes = hi_excl - lo;
    const std::int32_t* symbol = hap_reversed_.data() + (n - s + lo);
    const EmissionRows<Real> em_lo{em.a + lo, em.c + lo, em.g + lo, em.t + lo, em.n + lo};

    if (p <= kNarrowLanes) {
      narrow_dispatch<Real>(lanes, lo, k, stride, p, row_m_.data(), row_i_.data(), row_d_.data(), seam_m_.data(),
                            seam_i_.data(), seam_d_.data(), read.alpha().data(), read.beta().data(),
                            read.delta().data(), read.epsilon().data(), read.zeta().data(), symbol, emission);
    } else {
      first_column<Real>(lanes, rm + lo, ri + lo, rd + lo, from_m + lo, from_i + lo, from_d + lo, seam_m_.data() + lo,
                         seam_i_.data() + lo, seam_d_.data() + lo, diag_m_.data() + lo, diag_i_.data() + lo,
                         diag_d_.data() + lo, left_m_.data() + lo, left_i_.data() + lo, read.alpha().data() + lo,
                         read.beta().data() + lo, read.delta().data() + lo, read.epsilon().data() + lo,
                         read.zeta().data() + lo, symbol, em_lo);
      other_columns<Real>(lanes, k, stride, p, rm + lo, ri + lo, rd + lo, diag_m_.data() + lo, diag_i_.data() + lo,
                          diag_d_.data() + lo, left_m_.data() + lo, left_i_.data() + lo, read.alpha().data() + lo,
                          read.beta().data() + lo, read.delta().data() + lo, read.epsilon().data() + lo,
                          read.zeta().data() + lo, symbol, em_lo);
    }

    if constexpr (kInstrument) {
      for (std::size_t x = 0; x < k; ++x) {
        for (std::size_t t = lo; t < hi_excl; ++t) {
          ++stats->emission_lookups;
          const std::size_t code = static_cast<std::size_t>(symbol[t - lo]);
          const std::size_t position = t * k + x;
          stats->max_lookup_position = std::max(stats->max_lookup_position, position);
          if (code >= kAlphabetSize || position >= slots) stats->lookups_within_table = false;
        }
      }
      stats->cells += lanes * k;
    }

    if (owner_lane >= lo && owner_lane < hi_excl) acc += row_m_[owner_slot] + row_i_[owner_slot];
  }
  return static_cast<double>(acc);
}

template class PreparedRead<float>;
template class PreparedRead<double>;
template class WavefrontEngine<float>;
template class WavefrontEngine<double>;

namespace {

template <class Real>
Score forward_wavefront_impl(const ReadRecord& read, const Haplotype& hap, const EngineConfig& cfg,
                             WavefrontStats* stats) {
  const PreparedRead<Real> prepared(read, cfg);
  WavefrontEngine<Real> engine(cfg);
  return engine.score(prepared, hap, stats);
}

template <class Real>
void batch_impl(std::span<const Batch> batches, std::span<const WorkItem> items, const EngineConfig& cfg,
                ScoreSink& sink) {
  // Group items by read so each read is staged once.
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = items[a];
    const auto& y = items[b];
    return std::tie(x.batch_index, x.read_index, x.global_id) < std::tie(y.batch_index, y.read_index, y.global_id);
  });

  WavefrontEngine<Real> engine(cfg);
  std::size_t pos = 0;
  while (pos < order.size()) {
    const WorkItem& first = items[order[pos]];
    std::size_t end = pos;
    while (end < order.size() && items[order[end]].batch_index == first.batch_index &&
           items[order[end]].read_index == first.read_index) {
      ++end;
    }
    std::optional<PreparedRead<Real>> prepared;
    std::optional<ErrorKind> read_error;
    try {
      const Batch& batch = batches[first.batch_index];
      prepared.emplace(batch.reads().at(first.read_index), cfg);
    } catch (const Error& e) {
      read_error = e.kind();
    }
    for (std::size_t q = pos; q < end; ++q) {
      const WorkItem& item = items[order[q]];
      if (read_error) {
        sink.fail(item.global_id, *read_error);
        continue;
      }
      try {
        sink.set(item.global_id, engine.score(*prepared, batches[item.batch_index].haps().at(item.hap_index)));
      } catch (const Error& e) {
        sink.fail(item.global_id, e.kind());
      }
    }
    pos = end;
  }
}

}  // namespace

Score forward_wavefront(const ReadRecord& read, const Haplotype& hap, const EngineConfig& cfg, WavefrontStats* stats) {
  cfg.validate();
  if (cfg.precision == Precision::Single) return forward_wavefront_impl<float>(read, hap, cfg, stats);
  return forward_wavefront_impl<double>(read, hap, cfg, stats);
}

void forward_wavefront_batch(std::span<const Batch> batches, std::span<const WorkItem> items, const EngineConfig& cfg,
                             ScoreSink& sink) {
  cfg.validate();
  if (cfg.precision == Precision::Single) {
    batch_impl<float>(batches, items, cfg, sink);
  } else {
    batch_impl<double>(batches, items, cfg, sink);
  }
}

}  // namespace pairhmm
