#pragma once

#include <array>

namespace csrbf::reference {

/// Published u_max results for u0 = 0.1 and the collocation settings that produced them.
struct UmaxRow {
  double kappa;
  double exact_umax;
  double r_omega;
  double rho;
  int n;
  double icsrbf_umax;
  double adm_umax;  // comparison column only; never computed here
};

inline constexpr double kInitialValue = 0.1;

inline constexpr std::array<UmaxRow, 5> kUmaxTable{{
    {0.02, 0.9234271, 1.0, 1.766000, 15, 0.92342716, 0.9234270},
    {0.04, 0.8737199, 1.0, 1.780000, 18, 0.8737193, 0.8612401},
    {0.1, 0.7697414, 1.0, 1.811000, 18, 0.7697414, 0.7651130},
    {0.2, 0.6590503, 2.0, 1.032770, 18, 0.6590493, 0.6579123},
    {0.5, 0.4851902, 2.0, 1.114035, 27, 0.4851903, 0.4852823},
}};

/// Minimum ||R||^2 reported for each kappa.
struct NormRow {
  double kappa;
  double norm_sq;
};

inline constexpr std::array<NormRow, 5> kNormTable{{
    {0.5, 2.11e-08},
    {0.2, 2.87e-07},
    {0.1, 1.34e-07},
    {0.04, 7.86e-05},
    {0.02, 4.41e-05},
}};

inline constexpr std::array<double, 6> kLengthSweep{1.0, 2.0, 3.0, 5.0, 8.0, 10.0};

// Reproduction tolerances.
inline constexpr double kUmaxTolVsPublished = 5e-6;
inline constexpr double kUmaxTolVsExact = 2e-5;
inline constexpr double kNormFactor = 100.0;

}  // namespace csrbf::reference
