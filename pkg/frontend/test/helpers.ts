import { readFileSync } from 'node:fs';

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(new URL(`./fixtures/${name}`, import.meta.url), 'utf-8')) as T;
}

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

export type Responder = (call: RecordedCall) => { status?: number; body: unknown } | undefined;

/** fetch stand-in driven by a responder function; records every call. */
export function mockFetch(responder: Responder): { fetchFn: typeof fetch; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const fetchFn = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const call: RecordedCall = {
      url: String(input),
      method: init?.method ?? 'GET',
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    };
    calls.push(call);
    const matched = responder(call);
    if (!matched) {
      return new Response(JSON.stringify({ detail: `no responder for ${call.method} ${call.url}` }), {
        status: 404,
        headers: { 'Content-Type': 'application/json' },
      });
    }
    return new Response(JSON.stringify(matched.body), {
      status: matched.status ?? 200,
      headers: { 'Content-Type': 'application/json' },
    });
  }) as typeof fetch;
  return { fetchFn, calls };
}
