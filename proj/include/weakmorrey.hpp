#pragma once

#include "weakmorrey/bounds.hpp"
#include "weakmorrey/error.hpp"
#include "weakmorrey/functions.hpp"
#include "weakmorrey/geometry.hpp"
#include "weakmorrey/holder.hpp"
#include "weakmorrey/parse.hpp"
#include "weakmorrey/quasinorm.hpp"
#include "weakmorrey/serialize.hpp"
#include "weakmorrey/sharpness.hpp"
