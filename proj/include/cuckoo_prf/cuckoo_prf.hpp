#pragma once

#include "bits.hpp"
#include "combine.hpp"
#include "errors.hpp"
#include "games.hpp"
#include "gf.hpp"
#include "hashfam.hpp"
#include "mix.hpp"
#include "oracle.hpp"
#include "prfcore.hpp"
#include "transform.hpp"
