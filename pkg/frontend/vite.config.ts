import { defineConfig } from "vite";

// the backend runs via `riskirl serve --port 8000`
export default defineConfig({
  server: {
    proxy: {
      "/env": "http://127.0.0.1:8000",
      "/demos": "http://127.0.0.1:8000",
      "/train": "http://127.0.0.1:8000",
      "/posterior": "http://127.0.0.1:8000",
      "/select": "http://127.0.0.1:8000",
      "/plan": "http://127.0.0.1:8000",
      "/teleop": {
        target: "ws://127.0.0.1:8000",
        ws: true,
      },
    },
  },
});
