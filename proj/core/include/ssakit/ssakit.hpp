#pragma once

#include "ssakit/errors.hpp"
#include "ssakit/forecasting.hpp"
#include "ssakit/hankel.hpp"
#include "ssakit/lanczos.hpp"
#include "ssakit/parest.hpp"
#include "ssakit/reconstruction.hpp"
#include "ssakit/series_io.hpp"
#include "ssakit/session.hpp"
#include "ssakit/snapshot.hpp"
