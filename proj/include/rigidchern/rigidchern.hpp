#pragma once

/// @file rigidchern.hpp
/// @brief Umbrella header.

#include "rigidchern/errors.hpp"
#include "rigidchern/padic.hpp"
#include "rigidchern/laurent.hpp"
#include "rigidchern/charts.hpp"
#include "rigidchern/zpn_linalg.hpp"
#include "rigidchern/cech.hpp"
#include "rigidchern/chern_first.hpp"
#include "rigidchern/proj_bundle.hpp"
#include "rigidchern/mpd.hpp"
#include "rigidchern/random.hpp"
#include "rigidchern/json_io.hpp"
#include "rigidchern/verify.hpp"
