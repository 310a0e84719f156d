// Regenerates the committed far-field fixtures:
//   sound_soft_circle_k2.csv     partial-wave series for the unit disk, k = 2
//   half_circle_screen_M256.csv  Dirichlet half-circle screen at M = 256
#include <cstdio>
#include <string>

#include "krein/krein_solver.hpp"
#include "oracles.hpp"

namespace {

void write(const std::string& path, const std::vector<double>& angles, const krein::CVec& f) {
  FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("cannot write " + path);
  std::fprintf(out, "angle,F_re,F_im\n");
  for (std::size_t a = 0; a < angles.size(); ++a) {
    std::fprintf(out, "%.17g,%.17g,%.17g\n", angles[a], f(a).real(), f(a).imag());
  }
  std::fclose(out);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace krein;
  const std::string dir = argc > 1 ? argv[1] : KREIN_FIXTURE_DIR_DEFAULT;
  std::vector<double> angles;
  for (int a = 0; a < 64; ++a) angles.push_back(2.0 * kPi * a / 64);

  CVec oracle_ff(64);
  for (int a = 0; a < 64; ++a) oracle_ff(a) = oracle::sound_soft_far_field(2.0, 1.0, 0.0, angles[a]);
  write(dir + "/sound_soft_circle_k2.csv", angles, oracle_ff);

  ExtensionSpec screen;
  screen.on_arc = true;
  screen.arc = ArcSpec{0.0, kPi, 256};
  const BoundaryGrid g = graded_arc_grid(CurveParam::circle(1.0), screen.arc);
  const ScatterResult res = scattered_field(screen, g, 2.0, Point(std::cos(0.3), std::sin(0.3)), angles,
                                            Eigen::Matrix2Xd(2, 0), {});
  write(dir + "/half_circle_screen_M256.csv", angles, res.far_field);
  std::printf("fixtures written to %s\n", dir.c_str());
  return 0;
}
