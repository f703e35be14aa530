#pragma once

namespace scanpath {

#ifndef SCANPATH_VERSION
#define SCANPATH_VERSION "0.1.0"
#endif

inline const char* version() { return SCANPATH_VERSION; }

}  // namespace scanpath
