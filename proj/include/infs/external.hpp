#pragma once

#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "infs/errors.hpp"

namespace infs {

using Matrix = std::vector<std::vector<double>>;

// Line-delimited JSON over a child process's standard streams.
// Requests: {"cmd":"fit","matrix":[[...]],"labels":[...]} and
// {"cmd":"predict","matrix":[[...]]}. Responses carry {"status":"ok"} plus
// "predictions" for predict. The child lives for the lifetime of this
// object; requests are strictly request/response lockstep.
class ExternalClassifier {
public:
    ExternalClassifier(const std::string& command, int timeout_ms)
        : timeout_ms_(timeout_ms) {
        static std::once_flag sigpipe_once;
        std::call_once(sigpipe_once, [] { ::signal(SIGPIPE, SIG_IGN); });

        int to_child[2], from_child[2];
        if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
            throw IoError("external classifier: pipe() failed: " + std::string(strerror(errno)));
        }
        pid_ = ::fork();
        if (pid_ < 0) throw IoError("external classifier: fork() failed");
        if (pid_ == 0) {
            // Own process group, so a stuck command tree can be killed whole.
            ::setpgid(0, 0);
            ::dup2(to_child[0], STDIN_FILENO);
            ::dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        ::setpgid(pid_, pid_);
        ::close(to_child[0]);
        ::close(from_child[1]);
        stdin_fd_ = to_child[1];
        stdout_fd_ = from_child[0];
    }

    ExternalClassifier(const ExternalClassifier&) = delete;
    ExternalClassifier& operator=(const ExternalClassifier&) = delete;

    ~ExternalClassifier() {
        if (stdin_fd_ >= 0) ::close(stdin_fd_);
        if (stdout_fd_ >= 0) ::close(stdout_fd_);
        if (pid_ > 0) {
            int status = 0;
            if (::waitpid(pid_, &status, WNOHANG) == 0) {
                // Kill the whole group: the shell may have forked the actual
                // command, and a surviving grandchild would hold inherited
                // descriptors open indefinitely.
                ::kill(-pid_, SIGKILL);
                ::kill(pid_, SIGKILL);
                ::waitpid(pid_, &status, 0);
            }
        }
    }

    void fit(const Matrix& x, const std::vector<int>& labels) {
        nlohmann::json req{{"cmd", "fit"}, {"matrix", x}, {"labels", labels}};
        roundtrip(req);
    }

    std::vector<int> predict(const Matrix& x) {
        nlohmann::json req{{"cmd", "predict"}, {"matrix", x}};
        nlohmann::json resp = roundtrip(req);
        auto it = resp.find("predictions");
        if (it == resp.end() || !it->is_array()) {
            throw IoError("external classifier: predict response lacks \"predictions\"");
        }
        std::vector<int> out;
        out.reserve(it->size());
        for (const auto& v : *it) out.push_back(v.get<int>());
        if (out.size() != x.size()) {
            throw IoError("external classifier: prediction count mismatch");
        }
        return out;
    }

private:
    nlohmann::json roundtrip(const nlohmann::json& request) {
        std::string line = request.dump();
        line.push_back('\n');
        write_all(line);
        std::string reply = read_line();
        nlohmann::json resp = nlohmann::json::parse(reply, nullptr, false);
        if (resp.is_discarded()) throw IoError("external classifier: response is not valid JSON");
        if (resp.value("status", "") != "ok") {
            throw IoError("external classifier: child reported \"" +
                          resp.value("error", std::string("unknown error")) + "\"");
        }
        return resp;
    }

    void write_all(const std::string& data) {
        std::size_t written = 0;
        while (written < data.size()) {
            ssize_t n = ::write(stdin_fd_, data.data() + written, data.size() - written);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw IoError("external classifier: child closed its input: " +
                              std::string(strerror(errno)));
            }
            written += static_cast<std::size_t>(n);
        }
    }

    std::string read_line() {
        for (;;) {
            auto newline = buffer_.find('\n');
            if (newline != std::string::npos) {
                std::string line = buffer_.substr(0, newline);
                buffer_.erase(0, newline + 1);
                return line;
            }
            struct pollfd pfd{stdout_fd_, POLLIN, 0};
            int ready = ::poll(&pfd, 1, timeout_ms_);
            if (ready == 0) throw IoError("external classifier: timed out waiting for response");
            if (ready < 0) {
                if (errno == EINTR) continue;
                throw IoError("external classifier: poll failed");
            }
            char chunk[4096];
            ssize_t n = ::read(stdout_fd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw IoError("external classifier: read failed");
            }
            if (n == 0) throw IoError("external classifier: child exited before replying");
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    pid_t pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    int timeout_ms_;
    std::string buffer_;
};

}  // namespace infs
