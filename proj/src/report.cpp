#include "mshj/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <thread>

namespace mshj {

const char* suite_name(Suite s) {
  switch (s) {
    case Suite::Generalized: return "generalized";
    case Suite::Standard: return "standard";
    case Suite::Classic: return "classic";
    case Suite::Coefficients: return "coefficients";
  }
  return "?";
}

Suite parse_suite(const std::string& text) {
  for (Suite s : {Suite::Generalized, Suite::Standard, Suite::Classic, Suite::Coefficients})
    if (text == suite_name(s)) return s;
  throw ConfigError("unknown mode '" + text + "' (expected generalized, standard, classic or coefficients)");
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double ResidualReport::max_abs() const {
  double m = 0.0;
  for (const auto& f : families) m = std::max(m, f.max_abs);
  return m;
}

const FamilyStats* ResidualReport::family(const std::string& name) const {
  for (const auto& f : families)
    if (f.name == name) return &f;
  return nullptr;
}

std::vector<double> ResidualReport::pointwise_max() const {
  std::vector<double> out(grid_size, 0.0);
  for (const auto& f : families)
    for (std::size_t k = 0; k < f.pointwise.size(); ++k) out[k] = std::max(out[k], f.pointwise[k]);
  return out;
}

namespace {

constexpr std::size_t kBlock = 4096;

struct BlockFamily {
  std::string name;
  std::size_t components = 0;
  double sum_sq = 0.0;
  double max_abs = -1.0;
  std::size_t argmax = 0;
  std::size_t argmax_component = 0;
};

struct BlockResult {
  std::vector<BlockFamily> families;
  std::size_t skipped = 0;
  std::vector<std::string> messages;
};

struct FirstError {
  std::mutex mu;
  std::size_t index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;

  void offer(std::size_t k, std::exception_ptr e) {
    std::lock_guard<std::mutex> lock(mu);
    if (k < index) {
      index = k;
      error = std::move(e);
    }
  }
};

// |r| with non-finite values mapped to +inf so they always win the max.
double magnitude(double r) { return std::isfinite(r) ? std::abs(r) : std::numeric_limits<double>::infinity(); }

}  // namespace

ResidualReport grid_report(const PointEvaluator& eval, const GridSpec& grid, double tol,
                           const SweepOptions& options) {
  grid.validate();
  const std::size_t total = grid.size();
  const std::size_t dim = grid.axes.size();
  const std::size_t blocks = (total + kBlock - 1) / kBlock;

  std::vector<BlockResult> results(blocks);
  std::vector<std::vector<double>> pointwise;  // [family][point], sized lazily
  std::mutex layout_mu;
  std::vector<std::string> layout;  // family names in order

  FirstError first_error;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto work = [&] {
    std::vector<double> pt(dim);
    std::vector<double> sq(kBlock);
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= blocks || stop.load()) return;
      BlockResult& out = results[b];
      std::vector<std::vector<double>> sq_by_family;
      const std::size_t begin = b * kBlock;
      const std::size_t end = std::min(total, begin + kBlock);
      for (std::size_t k = begin; k < end; ++k) {
        grid.point(k, pt);
        PointResiduals r;
        try {
          r = eval(pt);
        } catch (const Error& e) {
          bool input = dynamic_cast<const InputError*>(&e) != nullptr;
          auto failure = std::make_exception_ptr(PointFailure(pt, e.what(), input));
          if (options.policy == ErrorPolicy::FailFast || input) {
            first_error.offer(k, failure);
            stop.store(true);
            return;
          }
          ++out.skipped;
          if (out.messages.size() < 5) out.messages.push_back(e.what());
          continue;
        }
        if (out.families.empty()) {
          for (const auto& f : r) out.families.push_back({f.name, f.values.size()});
          sq_by_family.assign(r.size(), {});
          std::lock_guard<std::mutex> lock(layout_mu);
          if (layout.empty() && !r.empty()) {
            for (const auto& f : r) layout.push_back(f.name);
            if (options.keep_pointwise)
              pointwise.assign(r.size(), std::vector<double>(total, std::numeric_limits<double>::quiet_NaN()));
          }
        }
        for (std::size_t f = 0; f < r.size() && f < out.families.size(); ++f) {
          BlockFamily& bf = out.families[f];
          double local_sq = 0.0, local_max = 0.0;
          std::size_t local_comp = 0;
          for (std::size_t c = 0; c < r[f].values.size(); ++c) {
            double a = magnitude(r[f].values[c]);
            local_sq += a * a;
            if (a > local_max) {
              local_max = a;
              local_comp = c;
            }
          }
          sq_by_family[f].push_back(local_sq);
          if (local_max > bf.max_abs) {
            bf.max_abs = local_max;
            bf.argmax = k;
            bf.argmax_component = local_comp;
          }
          if (options.keep_pointwise && f < pointwise.size()) pointwise[f][k] = local_max;
        }
      }
      for (std::size_t f = 0; f < out.families.size(); ++f) out.families[f].sum_sq = pairwise_sum(sq_by_family[f]);
    }
  };

  unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1 || blocks <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, blocks); ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error.error) std::rethrow_exception(first_error.error);

  ResidualReport report;
  for (const auto& a : grid.axes) report.axis_names.push_back(a.name);
  report.grid_size = total;
  report.tolerance = tol;
  std::vector<std::vector<double>> block_sums(layout.size());
  std::vector<std::size_t> evaluated(layout.size(), 0);
  report.families.resize(layout.size());
  for (std::size_t f = 0; f < layout.size(); ++f) {
    report.families[f].name = layout[f];
    report.families[f].max_abs = -1.0;
  }
  for (std::size_t b = 0; b < blocks; ++b) {
    const BlockResult& br = results[b];
    report.skipped += br.skipped;
    for (const auto& msg : br.messages)
      if (report.skipped_messages.size() < 5) report.skipped_messages.push_back(msg);
    for (std::size_t f = 0; f < br.families.size() && f < layout.size(); ++f) {
      const BlockFamily& bf = br.families[f];
      if (bf.name != layout[f]) throw std::logic_error("residual family layout changed between points");
      FamilyStats& fs = report.families[f];
      fs.components = bf.components;
      block_sums[f].push_back(bf.sum_sq);
      std::size_t start = b * kBlock;
      std::size_t end = std::min(total, start + kBlock);
      evaluated[f] += (end - start) - br.skipped;
      if (bf.max_abs > fs.max_abs) {
        fs.max_abs = bf.max_abs;
        fs.argmax_component = bf.argmax_component;
        fs.argmax.assign(dim, 0.0);
        grid.point(bf.argmax, fs.argmax);
      }
    }
  }
  for (std::size_t f = 0; f < layout.size(); ++f) {
    FamilyStats& fs = report.families[f];
    fs.max_abs = std::max(fs.max_abs, 0.0);
    double count = static_cast<double>(evaluated[f] * std::max<std::size_t>(fs.components, 1));
    fs.rms = count > 0 ? std::sqrt(pairwise_sum(block_sums[f]) / count) : 0.0;
    if (options.keep_pointwise && f < pointwise.size()) fs.pointwise = std::move(pointwise[f]);
  }
  report.pass = report.skipped == 0;
  for (const auto& f : report.families)
    if (!(f.max_abs < tol)) report.pass = false;
  return report;
}

void print_report(std::ostream& os, const ResidualReport& report, const std::string& title) {
  os << title << ": " << (report.pass ? "PASS" : "FAIL") << " (tol " << report.tolerance << ", "
     << report.grid_size << " points";
  if (report.skipped) os << ", " << report.skipped << " skipped";
  os << ")\n";
  auto flags = os.flags();
  for (const auto& f : report.families) {
    os << "  " << std::left << std::setw(22) << f.name << std::right << " n=" << std::setw(3) << f.components
       << "  max " << std::scientific << std::setprecision(3) << f.max_abs << "  rms " << f.rms;
    os.flags(flags);
    if (!f.argmax.empty()) {
      os << "  at (";
      for (std::size_t k = 0; k < f.argmax.size(); ++k) {
        if (k) os << ", ";
        os << report.axis_names[k] << "=" << std::setprecision(6) << f.argmax[k];
      }
      os << ") [" << f.argmax_component << "]";
    }
    os << "\n";
  }
  for (const auto& msg : report.skipped_messages) os << "  skipped: " << msg << "\n";
  os.flags(flags);
}

}  // namespace mshj
