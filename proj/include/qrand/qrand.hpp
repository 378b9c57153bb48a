#pragma once

#include "qrand/tolerances.hpp"
#include "qrand/errors.hpp"
#include "qrand/rng.hpp"
#include "qrand/state.hpp"
#include "qrand/entropy.hpp"
#include "qrand/optimize.hpp"
#include "qrand/randomness.hpp"
#include "qrand/discord.hpp"
#include "qrand/locking.hpp"
#include "qrand/io.hpp"
