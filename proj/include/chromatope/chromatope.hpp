#pragma once

// Everything except the HTTP service (chromatope/hex_service.hpp).
#include "chromatope/builders.hpp"
#include "chromatope/cell_complex.hpp"
#include "chromatope/characteristic.hpp"
#include "chromatope/cover.hpp"
#include "chromatope/errors.hpp"
#include "chromatope/fuzz.hpp"
#include "chromatope/geometry.hpp"
#include "chromatope/hex.hpp"
#include "chromatope/identities.hpp"
#include "chromatope/io.hpp"
#include "chromatope/lattice.hpp"
#include "chromatope/polytope.hpp"
#include "chromatope/ring.hpp"
