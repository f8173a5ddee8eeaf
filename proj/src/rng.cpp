#include "ldp/rng.hpp"

#include <cmath>

namespace ldp::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round(Counter& c, const Key& k) noexcept {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Counter philox4x32(Counter ctr, Key key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    round(ctr, key);
  }
  return ctr;
}

double normal_quantile(double p) noexcept {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        ((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
             6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
           1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
         1.3314166789178437745e+2) * r + 3.3871328727963666080e0;
    const double den =
        ((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
             3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
           5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
         4.2313330701600911252e+1) * r + 1.0;
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        ((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
             2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
           3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
         4.63033784615654529590e0) * r + 1.42343711074968357734e0;
    const double den =
        ((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
             1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
           6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
         2.05319162663775882187e0) * r + 1.0;
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        ((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
             1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
           2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
         5.46378491116411436990e0) * r + 6.65790464350110377720e0;
    const double den =
        ((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
             1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
           1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
         5.99832206555887937690e-1) * r + 1.0;
    val = num / den;
  }
  return q < 0.0 ? -val : val;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Stream::Stream(std::uint64_t root_seed, std::uint64_t stream_id) noexcept
    : key_{static_cast<std::uint32_t>(root_seed), static_cast<std::uint32_t>(root_seed >> 32)},
      stream_lo_(static_cast<std::uint32_t>(stream_id)),
      stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

std::uint64_t Stream::bits(std::uint64_t index) const noexcept {
  const std::uint64_t block = index >> 1;
  const Counter out = philox4x32(
      {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), stream_lo_,
       stream_hi_},
      key_);
  return (index & 1u) ? (static_cast<std::uint64_t>(out[3]) << 32 | out[2])
                      : (static_cast<std::uint64_t>(out[1]) << 32 | out[0]);
}

double Stream::uniform(std::uint64_t index) const noexcept { return to_unit(bits(index)); }

double Stream::normal(std::uint64_t index) const noexcept {
  return normal_quantile(uniform(index));
}

void Stream::normals(std::uint64_t first, std::size_t count, double* out) const noexcept {
  // Uniforms first, then the quantile transform in a separate pass so the
  // two loops pipeline independently.
  std::size_t k = 0;
  if ((first & 1u) && count > 0) {
    out[k] = uniform(first);
    ++k;
  }
  while (k + 1 < count) {
    const std::uint64_t block = (first + k) >> 1;
    const Counter c = philox4x32(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), stream_lo_,
         stream_hi_},
        key_);
    out[k] = to_unit(static_cast<std::uint64_t>(c[1]) << 32 | c[0]);
    out[k + 1] = to_unit(static_cast<std::uint64_t>(c[3]) << 32 | c[2]);
    k += 2;
  }
  if (k < count) out[k] = uniform(first + k);
  for (std::size_t i = 0; i < count; ++i) out[i] = normal_quantile(out[i]);
}

}  // namespace ldp::rng
