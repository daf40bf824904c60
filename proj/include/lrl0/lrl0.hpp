#pragma once

#include "lrl0/admm.hpp"
#include "lrl0/bench.hpp"
#include "lrl0/error.hpp"
#include "lrl0/image.hpp"
#include "lrl0/lowrank.hpp"
#include "lrl0/manifest.hpp"
#include "lrl0/noise.hpp"
#include "lrl0/parallel.hpp"
#include "lrl0/patching.hpp"
#include "lrl0/pgm.hpp"
#include "lrl0/pipeline.hpp"
#include "lrl0/prng.hpp"
#include "lrl0/pwmf.hpp"
#include "lrl0/version.hpp"
