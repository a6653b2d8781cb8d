#pragma once

#include "clifford.hpp"
#include "fueter.hpp"
#include "lattice.hpp"
#include "lattice_io.hpp"
#include "slice.hpp"
#include "theta.hpp"
#include "verify.hpp"
