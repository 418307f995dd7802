#include "decbench/meter/measurement_lock.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "decbench/error.hpp"

namespace decbench::meter {

std::filesystem::path MeasurementLock::default_path() {
  if (const char* env = std::getenv(kEnvVar); env != nullptr && *env != '\0') {
    return env;
  }
  return std::filesystem::temp_directory_path() / "decbench-measure.lock";
}

MeasurementLock::MeasurementLock(std::string label, std::filesystem::path event_log,
                                 std::filesystem::path lock_path)
    : label_(std::move(label)), event_log_(std::move(event_log)) {
  fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0666);
  if (fd_ < 0) {
    throw Error(Errc::kIo, "cannot open measurement lock " + lock_path.string() + ": " +
                               std::strerror(errno));
  }
  int rc = 0;
  do {
    rc = ::flock(fd_, LOCK_EX);
  } while (rc != 0 && errno == EINTR);
  if (rc != 0) {
    const int err = errno;
    ::close(fd_);
    throw Error(Errc::kIo, "cannot lock " + lock_path.string() + ": " + std::strerror(err));
  }
  log_event("acquire");
}

MeasurementLock::~MeasurementLock() {
  log_event("release");
  ::flock(fd_, LOCK_UN);
  ::close(fd_);
}

void MeasurementLock::log_event(const char* what) const {
  if (event_log_.empty()) return;
  const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                      std::chrono::steady_clock::now().time_since_epoch())
                      .count();
  std::ofstream out(event_log_, std::ios::app);
  out << what << ' ' << ns << ' ' << label_ << '\n';
}

}  // namespace decbench::meter
