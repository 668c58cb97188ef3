#pragma once

// Umbrella header.

#include "periodist/bounds.hpp"
#include "periodist/corona.hpp"
#include "periodist/errors.hpp"
#include "periodist/exp_type.hpp"
#include "periodist/expr.hpp"
#include "periodist/fourier.hpp"
#include "periodist/lattice.hpp"
#include "periodist/scan.hpp"
#include "periodist/sequence.hpp"
#include "periodist/serialize.hpp"
#include "periodist/stable_rank.hpp"
