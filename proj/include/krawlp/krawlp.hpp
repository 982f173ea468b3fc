#pragma once

#include "krawlp/errors.hpp"
#include "krawlp/field.hpp"
#include "krawlp/hierarchy.hpp"
#include "krawlp/lattice.hpp"
#include "krawlp/lp.hpp"
#include "krawlp/oracle.hpp"
#include "krawlp/rational.hpp"
#include "krawlp/simplex.hpp"
#include "krawlp/suites.hpp"
