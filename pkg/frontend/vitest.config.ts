import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    globalSetup: ["tests/server.ts"],
    testTimeout: 20000,
    hookTimeout: 60000,
  },
});
