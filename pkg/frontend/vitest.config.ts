import { defineConfig } from "vitest/config";

// Each suite boots a real service process, so the timeouts are generous.
export default defineConfig({
  test: {
    environment: "jsdom",
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
