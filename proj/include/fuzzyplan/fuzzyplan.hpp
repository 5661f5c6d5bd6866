#pragma once

#include "world.hpp"
#include "evaluation.hpp"
#include "search.hpp"
#include "planner.hpp"
#include "documents.hpp"
#include "svg.hpp"
