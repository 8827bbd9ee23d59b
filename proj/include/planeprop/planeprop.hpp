#pragma once

#include "planeprop/errors.hpp"
#include "planeprop/field.hpp"
#include "planeprop/io.hpp"
#include "planeprop/kernel.hpp"
#include "planeprop/propagation.hpp"
#include "planeprop/reconstruct.hpp"
#include "planeprop/sources.hpp"
#include "planeprop/spectrum.hpp"
