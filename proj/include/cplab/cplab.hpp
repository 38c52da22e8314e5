#pragma once

#include "cplab/bounds.hpp"
#include "cplab/error.hpp"
#include "cplab/experiment.hpp"
#include "cplab/generate.hpp"
#include "cplab/io.hpp"
#include "cplab/model.hpp"
#include "cplab/modify.hpp"
#include "cplab/oracle.hpp"
#include "cplab/rng.hpp"
