#pragma once

#include "wellpose/error.hpp"
#include "wellpose/extended_real.hpp"
#include "wellpose/family.hpp"
#include "wellpose/golden_section.hpp"
#include "wellpose/io.hpp"
#include "wellpose/objectives.hpp"
#include "wellpose/parallel.hpp"
#include "wellpose/parametric.hpp"
#include "wellpose/perturbation.hpp"
#include "wellpose/perturbation_function.hpp"
#include "wellpose/sampling.hpp"
#include "wellpose/seminorm.hpp"
#include "wellpose/spaces.hpp"
#include "wellpose/steckin.hpp"
#include "wellpose/verify.hpp"
