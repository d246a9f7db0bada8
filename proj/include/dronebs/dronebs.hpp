#pragma once

#include "association.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "params.hpp"
#include "placement.hpp"
#include "users.hpp"
