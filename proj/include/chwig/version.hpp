#pragma once

namespace chwig {

//! Library version, embedded in output-file provenance comments.
inline constexpr const char* version_string = "0.1.0";

} // namespace chwig
