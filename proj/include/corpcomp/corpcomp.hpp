#ifndef CORPCOMP_CORPCOMP_HPP
#define CORPCOMP_CORPCOMP_HPP

#include "corpcomp/distance.hpp"
#include "corpcomp/error.hpp"
#include "corpcomp/frequency.hpp"
#include "corpcomp/ingest.hpp"
#include "corpcomp/matrix.hpp"
#include "corpcomp/metaeval.hpp"
#include "corpcomp/synth.hpp"
#include "corpcomp/tokenize.hpp"

#endif  // CORPCOMP_CORPCOMP_HPP
