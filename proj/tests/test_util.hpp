#ifndef TEXTCOORD_TESTS_TEST_UTIL_HPP
#define TEXTCOORD_TESTS_TEST_UTIL_HPP

#include <filesystem>
#include <string>
#include <unistd.h>

namespace testutil {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("textcoord_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace testutil

#endif
