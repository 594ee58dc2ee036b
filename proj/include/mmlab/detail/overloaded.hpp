#pragma once

namespace mmlab::detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace mmlab::detail
