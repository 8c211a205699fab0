// Regenerates the bundled synthetic series in data/.
//
//   make_sample_data [out_dir] [seed]
//
// bimodal_hourly.csv   365 days x 24 hourly readings whose daily maxima are
//                      BGEV(xi=-0.25, mu=-0.375, sigma=1, delta=2) draws;
//                      mu puts the mean near 0, so standardizing the maxima
//                      (which shifts by the sample mean) keeps the dip at x = 0
// unimodal_hourly.csv  same layout, daily maxima GEV(xi=0.1, mu=20, sigma=3)
//
// Each day's maximum lands on a random hour; the other 23 readings sit below
// it by exponential gaps, so block maxima with block size 24 recover the draws.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <bgev.hpp>

namespace {

constexpr int kDays = 365;
constexpr int kHours = 24;

template <class Draw>
void write_series(const std::filesystem::path& path, std::uint64_t seed, double gap_scale,
                  Draw draw) {
  bgev::Rng rng(seed);
  std::string out = "time,value\n";
  char buf[96];
  // 2021 is not a leap year
  static constexpr int kMonthDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int month = 0, mday = 1;
  for (int d = 0; d < kDays; ++d) {
    const double peak = draw(rng);
    const int peak_hour = static_cast<int>(rng.uniform() * kHours);
    for (int h = 0; h < kHours; ++h) {
      const double v = h == peak_hour ? peak : peak + gap_scale * std::log(rng.uniform());
      std::snprintf(buf, sizeof buf, "2021-%02d-%02dT%02d:00,%.17g\n", month + 1, mday, h, v);
      out += buf;
    }
    if (++mday > kMonthDays[month]) {
      mday = 1;
      ++month;
    }
  }
  bgev::pipeline::write_text(path, out);
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20210101ULL;
  std::filesystem::create_directories(dir);

  const bgev::BgevParams bimodal(-0.25, -0.375, 1.0, 2.0);
  write_series(dir / "bimodal_hourly.csv", bgev::derive_seed(seed, 0), 0.4,
               [&](bgev::Rng& rng) { return bgev::quantile(rng.uniform(), bimodal); });

  const bgev::GevParams unimodal(0.1, 20.0, 3.0);
  write_series(dir / "unimodal_hourly.csv", bgev::derive_seed(seed, 1), 1.5,
               [&](bgev::Rng& rng) { return bgev::gev::quantile(rng.uniform(), unimodal); });

  std::printf("wrote %s/bimodal_hourly.csv and %s/unimodal_hourly.csv\n", dir.string().c_str(),
              dir.string().c_str());
  return 0;
}
