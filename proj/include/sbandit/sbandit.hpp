#pragma once

#include "sbandit/bandit.hpp"
#include "sbandit/catalog.hpp"
#include "sbandit/confidence.hpp"
#include "sbandit/environment.hpp"
#include "sbandit/harness.hpp"
#include "sbandit/mean_function.hpp"
#include "sbandit/parameter_space.hpp"
#include "sbandit/policies.hpp"
#include "sbandit/problem_file.hpp"
#include "sbandit/rng.hpp"
#include "sbandit/theory.hpp"
