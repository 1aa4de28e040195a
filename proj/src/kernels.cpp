#include "mbe/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <vector>

#include "mbe/error.hpp"

namespace mbe::kernels {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::reference: return "reference";
    case Mode::serial: return "serial";
    case Mode::parallel: return "parallel";
  }
  return "?";
}

namespace {

std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (b != 0 && a > std::numeric_limits<std::size_t>::max() / b) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

// Index geometry shared by both kernels. Strides are per input factor and
// are 0 for variables outside that factor's scope.
struct Layout {
  Scope out_vars;
  std::vector<int> out_cards;
  std::vector<int> elim_cards;
  std::vector<std::vector<std::size_t>> out_stride;   // [factor][out var]
  std::vector<std::vector<std::size_t>> elim_stride;  // [factor][elim var]
  std::size_t out_cells = 1;
  std::size_t elim_cells = 1;
};

Layout make_layout(std::span<const Factor* const> factors, std::span<const VarId> elim) {
  Layout L;
  Scope elim_vars;
  Scope uni = scope_union(factors);
  std::vector<int> uni_cards(uni.size(), 0);
  for (const Factor* f : factors) {
    for (std::size_t k = 0; k < f->arity(); ++k) {
      auto pos = static_cast<std::size_t>(
          std::lower_bound(uni.begin(), uni.end(), f->scope()[k]) - uni.begin());
      if (uni_cards[pos] == 0) {
        uni_cards[pos] = f->cards()[k];
      } else if (uni_cards[pos] != f->cards()[k]) {
        throw InvalidArgument("cardinality conflict for variable " + std::to_string(uni[pos]));
      }
    }
  }
  for (std::size_t j = 0; j < uni.size(); ++j) {
    if (std::find(elim.begin(), elim.end(), uni[j]) != elim.end()) {
      elim_vars.push_back(uni[j]);
      L.elim_cards.push_back(uni_cards[j]);
      L.elim_cells = checked_mul(L.elim_cells, static_cast<std::size_t>(uni_cards[j]));
    } else {
      L.out_vars.push_back(uni[j]);
      L.out_cards.push_back(uni_cards[j]);
      L.out_cells = checked_mul(L.out_cells, static_cast<std::size_t>(uni_cards[j]));
    }
  }
  L.out_stride.assign(factors.size(), std::vector<std::size_t>(L.out_vars.size(), 0));
  L.elim_stride.assign(factors.size(), std::vector<std::size_t>(elim_vars.size(), 0));
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const Factor& f = *factors[k];
    auto strides = f.strides();
    for (std::size_t j = 0; j < L.out_vars.size(); ++j) {
      int p = f.local_index(L.out_vars[j]);
      if (p >= 0) L.out_stride[k][j] = strides[static_cast<std::size_t>(p)];
    }
    for (std::size_t j = 0; j < elim_vars.size(); ++j) {
      int p = f.local_index(elim_vars[j]);
      if (p >= 0) L.elim_stride[k][j] = strides[static_cast<std::size_t>(p)];
    }
  }
  return L;
}

double initial(ElimOp op) {
  switch (op) {
    case ElimOp::max: return 0.0;  // tables are nonnegative
    case ElimOp::min: return std::numeric_limits<double>::infinity();
    default: return 0.0;
  }
}

inline double accumulate(ElimOp op, double acc, double x) {
  switch (op) {
    case ElimOp::max: return x > acc ? x : acc;
    case ElimOp::min: return x < acc ? x : acc;
    default: return acc + x;
  }
}

inline double finish(ElimOp op, double acc, std::size_t elim_cells) {
  if (op == ElimOp::mean) return acc / static_cast<double>(elim_cells);
  return acc;
}

void decode(std::size_t index, const std::vector<int>& cards, std::vector<int>& digits) {
  for (std::size_t j = cards.size(); j-- > 0;) {
    digits[j] = static_cast<int>(index % static_cast<std::size_t>(cards[j]));
    index /= static_cast<std::size_t>(cards[j]);
  }
}

void run_reference(std::span<const Factor* const> factors, const Layout& L, ElimOp op,
                   std::vector<double>& out) {
  std::vector<int> od(L.out_cards.size()), ed(L.elim_cards.size());
  for (std::size_t o = 0; o < L.out_cells; ++o) {
    decode(o, L.out_cards, od);
    double acc = initial(op);
    for (std::size_t e = 0; e < L.elim_cells; ++e) {
      decode(e, L.elim_cards, ed);
      double prod = 1.0;
      for (std::size_t k = 0; k < factors.size(); ++k) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < od.size(); ++j) idx += static_cast<std::size_t>(od[j]) * L.out_stride[k][j];
        for (std::size_t j = 0; j < ed.size(); ++j) idx += static_cast<std::size_t>(ed[j]) * L.elim_stride[k][j];
        prod *= (*factors[k])[idx];
      }
      acc = accumulate(op, acc, prod);
    }
    out[o] = finish(op, acc, L.elim_cells);
  }
}

// Offsets of every elimination configuration into each factor, [e * K + k].
std::vector<std::size_t> elim_offsets(const Layout& L, std::size_t K) {
  std::vector<std::size_t> offs(L.elim_cells * K, 0);
  std::vector<int> ed(L.elim_cards.size());
  for (std::size_t e = 0; e < L.elim_cells; ++e) {
    decode(e, L.elim_cards, ed);
    for (std::size_t k = 0; k < K; ++k) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < ed.size(); ++j) idx += static_cast<std::size_t>(ed[j]) * L.elim_stride[k][j];
      offs[e * K + k] = idx;
    }
  }
  return offs;
}

// Fills out[lo, hi) walking the output space with an odometer.
void fill_range(std::span<const Factor* const> factors, const Layout& L, ElimOp op,
                const std::vector<std::size_t>& offs, std::size_t lo, std::size_t hi,
                double* out) {
  if (lo >= hi) return;
  const std::size_t K = factors.size();
  const std::size_t nv = L.out_cards.size();
  std::vector<const double*> tab(K);
  for (std::size_t k = 0; k < K; ++k) tab[k] = factors[k]->table().data();

  std::vector<int> digits(nv);
  decode(lo, L.out_cards, digits);
  std::vector<std::size_t> base(K, 0);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < nv; ++j) base[k] += static_cast<std::size_t>(digits[j]) * L.out_stride[k][j];
  }

  for (std::size_t o = lo; o < hi; ++o) {
    double acc = initial(op);
    const std::size_t* eo = offs.data();
    for (std::size_t e = 0; e < L.elim_cells; ++e, eo += K) {
      double prod = 1.0;
      for (std::size_t k = 0; k < K; ++k) prod *= tab[k][base[k] + eo[k]];
      acc = accumulate(op, acc, prod);
    }
    out[o] = finish(op, acc, L.elim_cells);

    for (std::size_t j = nv; j-- > 0;) {
      const auto card = static_cast<std::size_t>(L.out_cards[j]);
      if (static_cast<std::size_t>(++digits[j]) < card) {
        for (std::size_t k = 0; k < K; ++k) base[k] += L.out_stride[k][j];
        break;
      }
      digits[j] = 0;
      for (std::size_t k = 0; k < K; ++k) base[k] -= L.out_stride[k][j] * (card - 1);
    }
  }
}

}  // namespace

Factor combine_eliminate(std::span<const Factor* const> factors, std::span<const VarId> elim,
                         ElimOp op, Mode mode, std::size_t max_cells) {
  Layout L = make_layout(factors, elim);
  if (L.out_cells > max_cells) {
    throw ResourceError("recorded function over " + std::to_string(L.out_vars.size()) +
                            " variables needs " + std::to_string(L.out_cells) +
                            " cells, cap is " + std::to_string(max_cells),
                        L.out_cells);
  }
  std::vector<double> out(L.out_cells);

  if (mode == Mode::reference) {
    run_reference(factors, L, op, out);
  } else {
    const auto offs = elim_offsets(L, factors.size());
    if (mode == Mode::serial) {
      fill_range(factors, L, op, offs, 0, L.out_cells, out.data());
    } else {
      const std::size_t n = L.out_cells;
#pragma omp parallel if (n >= kParallelThreshold)
      {
        const auto t = static_cast<std::size_t>(omp_get_thread_num());
        const auto nt = static_cast<std::size_t>(omp_get_num_threads());
        fill_range(factors, L, op, offs, n * t / nt, n * (t + 1) / nt, out.data());
      }
    }
  }
  return Factor(std::move(L.out_vars), std::move(L.out_cards), std::move(out));
}

}  // namespace mbe::kernels
