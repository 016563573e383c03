#pragma once

// Umbrella header.

#include "curvedim/cluster.hpp"
#include "curvedim/dataset.hpp"
#include "curvedim/embed.hpp"
#include "curvedim/errors.hpp"
#include "curvedim/frechet.hpp"
#include "curvedim/geometry.hpp"
#include "curvedim/oracle.hpp"
#include "curvedim/simplify.hpp"
