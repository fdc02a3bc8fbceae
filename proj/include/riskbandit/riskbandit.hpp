#pragma once
// Umbrella header: the standard-library-only core. The JSON config layer
// (config.hpp) and the CLI (cli.hpp) are separate includes because they
// depend on the vendored nlohmann/json and CLI11 single headers.
#include "bandit.hpp"
#include "bounds.hpp"
#include "distributions.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "normal.hpp"
#include "quadrature.hpp"
#include "risk.hpp"
#include "rng.hpp"
