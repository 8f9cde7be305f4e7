#pragma once

#include "tagforge/error.hpp"
#include "tagforge/gorn.hpp"
#include "tagforge/tree.hpp"
#include "tagforge/grammar.hpp"
#include "tagforge/algebra.hpp"
#include "tagforge/derivation.hpp"
#include "tagforge/lexicon.hpp"
#include "tagforge/io.hpp"
#include "tagforge/chart.hpp"
#include "tagforge/cfg.hpp"
