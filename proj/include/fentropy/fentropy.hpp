#pragma once

#include "bounds.hpp"
#include "convex.hpp"
#include "entropy.hpp"
#include "errors.hpp"
#include "format.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "majorization.hpp"
#include "rng.hpp"
#include "states.hpp"
#include "verify.hpp"
