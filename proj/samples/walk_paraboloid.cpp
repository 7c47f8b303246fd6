// Where on a hilltop can the slope metric be used, and how does a walker's
// reachable set look from a point just below the summit?

#include <cstdio>

#include "slope/slope.hpp"

int main() {
  using namespace slope;
  const ProfileCurve hill = ProfileCurve::paraboloid(100.0);
  const SurfaceSpec surf = SurfaceSpec::revolution(hill);

  const ConvexityDomain dom = convexity_domain(hill, 1024);
  std::printf("strongly convex for s < %.10f\n", dom.boundary_roots.at(0).location);

  const Indicatrix ind = indicatrix(surf, 0.1, 0.0);
  std::printf("indicatrix at (0.1, 0): r = %.6f + %.6f cos(theta), residual %.1e\n", ind.fit.c0, ind.fit.c1,
              ind.fit.residual);

  const Wavefront wf = wavefront(surf, {0.1, 0.0}, 0.05, 8, 1e-3, NavigationParams::normalized(), 1);
  for (std::size_t k = 0; k < wf.rays.size(); ++k) {
    const Vec2 end = wf.rays[k].points.back();
    std::printf("ray %zu ends at (%+.5f, %+.5f) [%s]\n", k, end.x, end.y,
                std::string(to_string(wf.rays[k].status)).c_str());
  }
}
