#include <doctest.h>

#include "maxharm/partition.hpp"

using namespace maxharm;

TEST_CASE("smooth step endpoints and symmetry") {
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(2.0) == 1.0);
  for (double t : {0.1, 0.25, 0.5, 0.9})
    CHECK(smooth_step(t) + smooth_step(1.0 - t) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("build_partition sizes and low-pass core") {
  GridSpec spec(1, 32.0, 512);  // nyquist 8
  LpPartition p = build_partition(spec, 1);
  CHECK(p.k_max == 2);
  CHECK(p.resolvable_band() == 4.0);
  CHECK(p.phi_hat(0.0) == 1.0);
  for (int k = 1; k <= p.k_max; ++k) CHECK(p.psi_hat(k, 0.0) == 0.0);

  // partition of unity on |xi| <= 4 at every grid frequency
  PartitionCheck chk = partition_check(p);
  CHECK(chk.max_deviation <= 1e-12);
  CHECK(chk.max_support_violation <= 1e-15);
  CHECK(chk.smoothness_proxy < 200.0);

  // direct summation oracle across the band
  for (int i = 0; i < spec.N; ++i) {
    double xi = std::abs(spec.freq(i));
    if (xi <= 4.0) CHECK(std::abs(p.sum(xi) - 1.0) <= 1e-12);
  }
}

TEST_CASE("build_partition rejects coarse grids with the required N") {
  GridSpec spec(1, 32.0, 256);  // nyquist 4 < 8
  try {
    build_partition(spec, 1);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("N >= 512") != std::string::npos);
  }
}

TEST_CASE("telescoping and scaling identities") {
  GridSpec spec(1, 16.0, 512);
  LpPartition p = build_partition(spec, 1);
  for (double xi = 0.0; xi <= spec.nyquist(); xi += 0.03125) {
    CHECK(std::abs(psi_hat_radial(xi) - (phi_hat_radial(xi) - phi_hat_radial(2 * xi))) <= 1e-14);
    for (int k = 1; k <= p.k_max; ++k)
      CHECK(p.psi_hat(k, xi) == psi_hat_radial(std::ldexp(xi, -k)));  // exact by construction
  }
  // interior dyadic point: the two adjacent annuli sum to one
  LpPartition q = build_partition(GridSpec(1, 16.0, 1024), 1);
  double xi = 4.0;  // = 2^2, interior
  CHECK(q.psi_hat(2, xi) + q.psi_hat(3, xi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q.phi_hat(xi) == 0.0);
  CHECK(q.psi_hat(1, xi) == 0.0);
}

TEST_CASE("annulus support") {
  GridSpec spec(1, 16.0, 1024);
  LpPartition p = build_partition(spec, 1);
  for (int k = 1; k <= p.k_max; ++k) {
    CHECK(p.psi_hat(k, std::ldexp(1.0, k - 1) * 0.99) == 0.0);
    CHECK(p.psi_hat(k, std::ldexp(1.0, k + 1) * 1.01) == 0.0);
    CHECK(p.psi_hat(k, std::ldexp(1.0, k)) > 0.0);
  }
}

TEST_CASE("partition_check flags tampered partitions") {
  GridSpec spec(1, 32.0, 512);
  LpPartition p = build_partition(spec, 1);

  LpPartition missing = p;
  missing.window_scale[p.k_max] = 0.0;  // delete the top annulus
  PartitionCheck chk = partition_check(missing);
  CHECK(chk.max_deviation == doctest::Approx(1.0).epsilon(0.05));

  LpPartition rescaled = p;
  rescaled.window_scale *= 0.5;
  PartitionCheck chk2 = partition_check(rescaled);
  CHECK(chk2.max_deviation == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("multilinear partition on the stacked frequency variable") {
  GridSpec spec(1, 16.0, 256);
  LpPartition p = build_partition(spec, 2);
  CHECK(p.total_dim == 2);
  PartitionCheck chk = partition_check(p);
  CHECK(chk.max_deviation <= 1e-12);
}
