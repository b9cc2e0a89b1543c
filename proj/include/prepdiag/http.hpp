#pragma once

#include "prepdiag/app.hpp"
#include "vendor/httplib.h"

namespace prepdiag {

/// Routes every /api endpoint of `service` on `server`.
void install_routes(httplib::Server& server, Service& service);

}  // namespace prepdiag
