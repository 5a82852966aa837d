#pragma once

#include "scirank/auth.hpp"
#include "scirank/brad.hpp"
#include "scirank/combine.hpp"
#include "scirank/corpus.hpp"
#include "scirank/engine.hpp"
#include "scirank/error.hpp"
#include "scirank/eval.hpp"
#include "scirank/search.hpp"
#include "scirank/str.hpp"
