#include "dmfd/metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "dmfd/error.hpp"

namespace dmfd {

double mse(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ShapeError("mse: shape mismatch");
  if (a.empty()) return 0.0;
  double acc = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    acc += d * d;
  }
  return acc / static_cast<double>(av.size());
}

LogAdjusted log_adjusted(double mse) {
  if (!(mse >= 0.0)) throw NumericError("log_adjusted: mse must be non-negative");
  if (mse == 0.0) return {0.0, false};
  if (mse == 1.0) return {std::numeric_limits<double>::infinity(), true};
  return {-1.0 / std::log(mse), mse > 1.0};
}

void ErrorCurve::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "sweep,mse,log_adjusted,flag\n";
  char buf[64];
  auto num = [&](double v) {
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, r.ptr - buf);
  };
  for (const ErrorPoint& p : points) {
    out << p.sweep << ',';
    num(p.mse);
    out << ',';
    num(p.log_adjusted.value);
    out << ',' << (p.diverged ? "diverged" : p.log_adjusted.out_of_range ? "mse>=1" : "ok") << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace dmfd
