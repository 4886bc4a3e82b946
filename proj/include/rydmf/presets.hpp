#pragma once

#include "rydmf/core.hpp"

namespace rydmf::presets {

// Cs 6S1/2 -> 6P3/2 -> 7S1/2 -> nP ladder with Delta1 = 0; the three-photon
// resonance is at Delta1 = 2pi x 4 MHz.
inline SchemeParams cesium_eit() {
  SchemeParams p;
  p.omega1 = mhz_to_angular(0.1);
  p.omega2 = mhz_to_angular(8.0);
  p.omega3 = mhz_to_angular(1.0);
  p.gamma1 = mhz_to_angular(5.39);
  p.gamma2 = mhz_to_angular(3.31);
  p.gamma3 = 0.0;
  p.delta1 = 0.0;
  p.delta2 = 0.0;
  p.delta3 = mhz_to_angular(-4.0);
  return p;
}

// Rb 5S1/2 -> 5P3/2 -> 5D5/2 -> nF ladder, all detunings zero.
inline SchemeParams rubidium_eia() {
  SchemeParams p;
  p.omega1 = mhz_to_angular(10.0);
  p.omega2 = mhz_to_angular(25.0);
  p.omega3 = mhz_to_angular(18.0);
  p.gamma1 = mhz_to_angular(6.0);
  p.gamma2 = mhz_to_angular(0.66);
  p.gamma3 = 0.0;
  return p;
}

}  // namespace rydmf::presets
