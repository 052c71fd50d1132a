#pragma once

// Everything except the command line and file I/O (which need libpng).

#include "delaunay.hpp"
#include "error.hpp"
#include "filtration.hpp"
#include "geometry.hpp"
#include "image.hpp"
#include "landscape.hpp"
#include "persistence.hpp"
#include "structures.hpp"
