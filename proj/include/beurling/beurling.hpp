#pragma once

#include "beurling/analysis.hpp"
#include "beurling/errors.hpp"
#include "beurling/gen_primes.hpp"
#include "beurling/logint.hpp"
#include "beurling/multiset.hpp"
#include "beurling/numeric.hpp"
#include "beurling/pipeline.hpp"
#include "beurling/rng.hpp"
#include "beurling/sampler.hpp"
#include "beurling/semigroup.hpp"
#include "beurling/sieve.hpp"
#include "beurling/step_table.hpp"
#include "beurling/template_fn.hpp"
#include "beurling/templates.hpp"
#include "beurling/zeta.hpp"
