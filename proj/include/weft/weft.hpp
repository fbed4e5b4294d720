#pragma once

#include "weft/alphabet.hpp"
#include "weft/causal.hpp"
#include "weft/coalgebra.hpp"
#include "weft/collatz.hpp"
#include "weft/dyadic.hpp"
#include "weft/errors.hpp"
#include "weft/generate.hpp"
#include "weft/level_map.hpp"
#include "weft/mealy.hpp"
#include "weft/random.hpp"
#include "weft/specfile.hpp"
#include "weft/stream.hpp"
#include "weft/verify.hpp"
#include "weft/woven.hpp"
