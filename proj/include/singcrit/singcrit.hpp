#pragma once

// Umbrella header for the library (everything except the command-line layer).

#include "singcrit/apps.hpp"
#include "singcrit/classification.hpp"
#include "singcrit/classify.hpp"
#include "singcrit/error.hpp"
#include "singcrit/expr.hpp"
#include "singcrit/frontal.hpp"
#include "singcrit/germ.hpp"
#include "singcrit/jet.hpp"
#include "singcrit/linalg.hpp"
#include "singcrit/mesh.hpp"
#include "singcrit/report.hpp"
#include "singcrit/tolerance.hpp"
