#pragma once

#include "weylsum/arith.hpp"
#include "weylsum/bessel.hpp"
#include "weylsum/bump.hpp"
#include "weylsum/characters.hpp"
#include "weylsum/circle.hpp"
#include "weylsum/expsums.hpp"
#include "weylsum/hecke.hpp"
#include "weylsum/quadrature.hpp"
#include "weylsum/transforms.hpp"
#include "weylsum/pipeline/direct_sum.hpp"
#include "weylsum/pipeline/jutila.hpp"
#include "weylsum/pipeline/omega.hpp"
#include "weylsum/pipeline/params.hpp"
#include "weylsum/pipeline/poisson.hpp"
#include "weylsum/pipeline/sign_change.hpp"
#include "weylsum/pipeline/stilde.hpp"
#include "weylsum/pipeline/sweep.hpp"
#include "weylsum/pipeline/voronoi.hpp"
#include "weylsum/harness/config.hpp"
#include "weylsum/harness/report.hpp"
#include "weylsum/harness/cli.hpp"
