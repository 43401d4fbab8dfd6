#ifndef DRESSEDW_DRESSEDW_HPP
#define DRESSEDW_DRESSEDW_HPP

#include "types.hpp"
#include "state_space.hpp"
#include "pulses.hpp"
#include "frames.hpp"
#include "dynamics.hpp"
#include "io.hpp"
#include "experiments.hpp"
#include "config.hpp"
#include "version.hpp"

#endif // DRESSEDW_DRESSEDW_HPP
