#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cws/api.hpp"
#include "cws/engine.hpp"

#include "file_util.hpp"

namespace {

bool split_listen(const std::string& listen, std::string& host, int& port) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos || colon == 0 ||
      colon + 1 >= listen.size()) {
    return false;
  }
  host = listen.substr(0, colon);
  try {
    port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception&) {
    return false;
  }
  return port > 0 && port < 65536;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Workflow-aware scheduler service: REST interface over a simulated "
      "cluster"};
  std::string cluster_path;
  std::string listen = "127.0.0.1:8080";
  app.add_option("--cluster", cluster_path,
                 "cluster config JSON "
                 "({\"nodes\":[…],\"startupOverheadMs\":…})")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--listen", listen, "host:port to serve on")
      ->envname("CWS_LISTEN")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::string host;
  int port = 0;
  if (!split_listen(listen, host, port)) {
    std::cerr << "invalid --listen value '" << listen
              << "' (expected host:port)\n";
    return 2;
  }

  try {
    cws::SchedulerEngine engine(
        cws::ClusterConfig::from_json_text(cli_util::read_file(cluster_path)));
    cws::ApiServer server(engine);
    std::cerr << "serving on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
      std::cerr << "cannot listen on " << listen << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
